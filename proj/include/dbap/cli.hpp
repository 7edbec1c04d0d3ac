#pragma once

// Command-line front end. All output bytes are deterministic; data files are
// only written after the full result has been computed, so a failing
// invocation never leaves a partial file behind.
//
// Exit codes: 0 success, 1 I/O failure, 2 argument/validation error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dbap/layout_io.hpp"

namespace dbap::cli {

namespace detail {

using dbap::detail::fixed9;

// Comma-separated decimals without spaces: "x,y" or "x,y,z".
inline Point parse_point(const std::string& text) {
    std::vector<double> c;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t comma = text.find(',', begin);
        const std::string field =
            text.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
        try {
            std::size_t used = 0;
            const double v = std::stod(field, &used);
            if (used != field.size()) throw std::invalid_argument(field);
            c.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("bad coordinate '" + field + "' in '" + text + "'");
        }
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    if (c.size() == 2) return Point(c[0], c[1]);
    if (c.size() == 3) return Point(c[0], c[1], c[2]);
    throw ValidationError("coordinates must be 'x,y' or 'x,y,z', got '" + text + "'");
}

inline Layout load_layout(const std::string& source) {
    for (const std::string& name : preset_names()) {
        if (source == name) return preset(source);
    }
    std::ifstream f(source, std::ios::binary);
    if (!f) {
        throw IoError("cannot open layout file '" + source +
                      "' (and it is not a preset name)");
    }
    std::ostringstream text;
    text << f.rdbuf();
    return parse_layout(text.str());
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "original") return Algorithm::original;
    if (name == "adbap") return Algorithm::adbap;
    if (name == "improved") return Algorithm::improved;
    throw ValidationError("unknown algorithm '" + name + "'");
}

struct Options {
    std::string layout_source;
    std::string algo = "improved";
    double rolloff = 6.0;
    std::optional<double> rs;
    double r_scalar = 0.2;
    bool bias = false;
    std::string attenuation = "plus-one-squared";
    unsigned threads = 1;

    std::string trajectory = "spiral";
    std::size_t samples = 1000;
    std::optional<double> theta_end;
    std::optional<double> r_max;
    double radius = 2.0;
    std::optional<std::string> center;
    std::optional<std::size_t> speaker_index;
    std::optional<std::string> line_start;
    std::optional<std::string> line_end;
    bool ccw = false;

    std::size_t bins = 36;
    std::optional<std::string> listener;
    double facing = 0.0;

    std::string source;
    std::optional<std::string> project;
    std::string out_path;
    std::string out_dir;
    std::string preset_name;
};

inline PannerConfig make_config(const Options& o) {
    PannerConfig cfg;
    cfg.rolloff_db = o.rolloff;
    cfg.blur = o.rs;
    cfg.blur_scalar = o.r_scalar;
    cfg.bias_enabled = o.bias;
    cfg.algorithm = parse_algorithm(o.algo);
    cfg.exterior_attenuation = o.attenuation == "plus-one-2a"
                                   ? ExteriorAttenuation::plus_one_2a
                                   : ExteriorAttenuation::plus_one_squared;
    return cfg;
}

inline Trajectory build_trajectory(const Options& o, const Layout& layout) {
    if (o.trajectory == "spiral") {
        Trajectory::Spiral params;
        if (o.theta_end) params.theta_end = *o.theta_end;
        params.r_max = o.r_max ? *o.r_max : default_spiral_radius(layout);
        params.ccw = o.ccw;
        return Trajectory::spiral(params, o.samples);
    }
    if (o.trajectory == "circle") {
        Trajectory::Circle params;
        if (o.speaker_index) {
            if (*o.speaker_index >= layout.size()) {
                throw ValidationError("speaker index " + std::to_string(*o.speaker_index) +
                                      " out of range (layout has " +
                                      std::to_string(layout.size()) + " speakers)");
            }
            params.center = layout.speakers()[*o.speaker_index];
        } else if (o.center) {
            params.center = parse_point(*o.center);
        } else {
            params.center = layout.reference();
        }
        params.radius = o.radius;
        params.ccw = o.ccw;
        return Trajectory::circle(params, o.samples);
    }
    if (o.trajectory == "line") {
        if (!o.line_start || !o.line_end) {
            throw ValidationError("line trajectories need --start and --end");
        }
        return Trajectory::line(parse_point(*o.line_start), parse_point(*o.line_end),
                                o.samples);
    }
    throw ValidationError("unknown trajectory '" + o.trajectory + "'");
}

// Data files are opened only after the payload is fully computed.
inline void write_output(const std::string& path, const std::string& bytes,
                         std::ostream& out) {
    if (path.empty()) {
        out << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file '" + path + "'");
    f << bytes;
    f.flush();
    if (!f) throw IoError("failed writing output file '" + path + "'");
}

inline void run_gains(const Options& o, std::ostream& out) {
    const Layout layout = load_layout(o.layout_source);
    const PannerConfig cfg = make_config(o);
    const GainFrame frame = compute_gains(layout, cfg, parse_point(o.source));
    std::string text = "gains";
    for (double g : frame.gains) {
        text += ' ';
        text += fixed9(g);
    }
    text += "\npower " + fixed9(frame.total_power);
    text += "\np " + fixed9(frame.p);
    text += "\nhull_distance " + fixed9(frame.hull_distance);
    text += '\n';
    out << text;
}

inline void run_hull(const Options& o, std::ostream& out) {
    const Layout layout = load_layout(o.layout_source);
    const Hull2D hull = convex_hull_2d(layout.speakers());
    std::string text;
    for (const Point& v : hull.vertices()) {
        text += "vertex " + fixed9(v.x()) + ' ' + fixed9(v.y()) + '\n';
    }
    if (o.project) {
        const auto proj = hull.project(parse_point(*o.project));
        text += "projection " + fixed9(proj.point.x()) + ' ' + fixed9(proj.point.y()) + '\n';
        text += "distance " + fixed9(proj.distance) + '\n';
    }
    out << text;
}

inline void run_sweep(const Options& o, std::ostream& out) {
    const Layout layout = load_layout(o.layout_source);
    const PannerConfig cfg = make_config(o);
    const SweepTable table = sweep(layout, cfg, build_trajectory(o, layout), o.threads);
    write_output(o.out_path, write_sweep_csv(table), out);
}

inline void run_heatmap(const Options& o, std::ostream& out) {
    const Layout layout = load_layout(o.layout_source);
    const PannerConfig cfg = make_config(o);
    std::optional<Point> listener;
    if (o.listener) listener = parse_point(*o.listener);
    const SplHeatmap map = spl_heatmap(layout, cfg, build_trajectory(o, layout), o.bins,
                                       listener, o.facing, o.threads);
    write_output(o.out_path, write_heatmap_csv(map), out);
}

inline void run_preset(const Options& o, std::ostream& out) {
    write_output(o.out_path, serialize_layout(preset(o.preset_name)), out);
}

inline void run_compare(const Options& o, std::ostream& out) {
    const Layout layout = load_layout(o.layout_source);
    const Trajectory trajectory = build_trajectory(o, layout);

    struct Entry {
        const char* name;
        Algorithm algorithm;
        std::string csv;
        DiscontinuityMetrics metrics;
    };
    std::vector<Entry> entries = {{"original", Algorithm::original, {}, {}},
                                  {"adbap", Algorithm::adbap, {}, {}},
                                  {"improved", Algorithm::improved, {}, {}}};
    PannerConfig cfg = make_config(o);
    for (Entry& e : entries) {
        cfg.algorithm = e.algorithm;
        const SweepTable table = sweep(layout, cfg, trajectory, o.threads);
        e.csv = write_sweep_csv(table);
        e.metrics = discontinuity_metric(table);
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + o.out_dir + "'");
    std::string summary;
    for (const Entry& e : entries) {
        const fs::path path = fs::path(o.out_dir) / (std::string(e.name) + ".csv");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open output file '" + path.string() + "'");
        f << e.csv;
        f.flush();
        if (!f) throw IoError("failed writing output file '" + path.string() + "'");
        if (!summary.empty()) summary += " | ";
        summary += std::string(e.name) + " max_gain_step=" + fixed9(e.metrics.max_gain_step) +
                   " max_power_step=" + fixed9(e.metrics.max_power_step);
    }
    out << summary << '\n';
}

}  // namespace detail

// Runs the CLI on already-split arguments (no program name). Output goes to
// `out`, single-line diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    detail::Options o;

    CLI::App app{"Layout-agnostic amplitude panning toolkit", "dbap"};
    app.require_subcommand(1);

    const auto add_layout = [&](CLI::App* cmd) {
        cmd->add_option("--layout", o.layout_source,
                        "Layout file or preset (grid3x3, asym10, quad, nonagon)")
            ->required();
    };
    const auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--rolloff", o.rolloff, "Rolloff in dB per doubling of distance")
            ->capture_default_str();
        auto* rs = cmd->add_option("--rs", o.rs, "Explicit spatial blur r_s");
        cmd->add_option("--r-scalar", o.r_scalar,
                        "Blur as a scalar of the mean centroid-to-speaker distance")
            ->capture_default_str()
            ->excludes(rs);
        cmd->add_flag("--bias,!--no-bias", o.bias,
                      "Bias gains toward near speakers far outside the field (improved)");
        cmd->add_option("--algo", o.algo, "Gain law")
            ->check(CLI::IsMember({"original", "adbap", "improved"}))
            ->capture_default_str();
        cmd->add_option("--attenuation", o.attenuation,
                        "Exterior attenuation of the original algorithm")
            ->check(CLI::IsMember({"plus-one-squared", "plus-one-2a"}))
            ->capture_default_str();
        cmd->add_option("--threads", o.threads, "Worker threads for sweeps and heatmaps")
            ->envname("DBAP_THREADS")
            ->check(CLI::Range(1u, 256u));
    };
    const auto add_trajectory = [&](CLI::App* cmd) {
        cmd->add_option("--trajectory", o.trajectory, "Trajectory kind")
            ->check(CLI::IsMember({"spiral", "circle", "line"}))
            ->capture_default_str();
        cmd->add_option("--samples", o.samples, "Sample count along the trajectory")
            ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
            ->capture_default_str();
        cmd->add_option("--theta-end", o.theta_end, "Spiral angular extent (default 3*pi)");
        cmd->add_option("--r-max", o.r_max,
                        "Spiral end radius (default 1.35 x layout circumradius)");
        cmd->add_option("--radius", o.radius, "Circle radius")->capture_default_str();
        auto* center = cmd->add_option("--center", o.center,
                                       "Circle center 'x,y' (default: reference)");
        cmd->add_option("--speaker-index", o.speaker_index,
                        "Circle around this speaker instead of --center")
            ->excludes(center);
        cmd->add_option("--start", o.line_start, "Line start 'x,y'");
        cmd->add_option("--end", o.line_end, "Line end 'x,y'");
        cmd->add_flag("--ccw", o.ccw, "Counter-clockwise spiral/circle (default clockwise)");
    };

    CLI::App* gains = app.add_subcommand("gains", "Gains for one source position");
    add_layout(gains);
    add_config(gains);
    gains->add_option("--source", o.source, "Source position 'x,y' or 'x,y,z'")->required();

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Gain sweep along a trajectory (CSV)");
    add_layout(sweep_cmd);
    add_config(sweep_cmd);
    add_trajectory(sweep_cmd);
    sweep_cmd->add_option("--out", o.out_path, "Output file (default: stdout)");

    CLI::App* heatmap_cmd =
        app.add_subcommand("heatmap", "Listener SPL heatmap along a trajectory (CSV)");
    add_layout(heatmap_cmd);
    add_config(heatmap_cmd);
    add_trajectory(heatmap_cmd);
    heatmap_cmd->add_option("--bins", o.bins, "Incoming-angle bins over [0, pi]")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
        ->capture_default_str();
    heatmap_cmd->add_option("--listener", o.listener, "Listener 'x,y' (default: reference)");
    heatmap_cmd->add_option("--facing", o.facing, "Listener facing angle, radians")
        ->capture_default_str();
    heatmap_cmd->add_option("--out", o.out_path, "Output file (default: stdout)");

    CLI::App* hull_cmd = app.add_subcommand("hull", "Convex hull vertices and projections");
    add_layout(hull_cmd);
    hull_cmd->add_option("--project", o.project, "Project this point onto the hull");

    CLI::App* preset_cmd = app.add_subcommand("preset", "Write a built-in layout document");
    preset_cmd->add_option("name", o.preset_name, "Preset name")->required();
    preset_cmd->add_option("--out", o.out_path, "Output file (default: stdout)");

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Sweep all three algorithms over one trajectory and report step metrics");
    add_layout(compare_cmd);
    add_config(compare_cmd);
    add_trajectory(compare_cmd);
    compare_cmd->add_option("--out-dir", o.out_dir, "Directory for the three CSV files")
        ->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        std::string message = e.what();
        std::replace(message.begin(), message.end(), '\n', ' ');
        err << "error: " << message << '\n';
        return 2;
    }

    try {
        if (gains->parsed()) {
            detail::run_gains(o, out);
        } else if (sweep_cmd->parsed()) {
            detail::run_sweep(o, out);
        } else if (heatmap_cmd->parsed()) {
            detail::run_heatmap(o, out);
        } else if (hull_cmd->parsed()) {
            detail::run_hull(o, out);
        } else if (preset_cmd->parsed()) {
            detail::run_preset(o, out);
        } else if (compare_cmd->parsed()) {
            detail::run_compare(o, out);
        }
        return 0;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace dbap::cli
