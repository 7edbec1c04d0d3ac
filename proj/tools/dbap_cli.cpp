#include <iostream>

#include "dbap/cli.hpp"

int main(int argc, char** argv) {
    return dbap::cli::run(argc, argv, std::cout, std::cerr);
}
