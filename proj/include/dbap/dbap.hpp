#pragma once

// Umbrella header for the panning toolkit.

#include "dbap/analysis.hpp"
#include "dbap/errors.hpp"
#include "dbap/geometry.hpp"
#include "dbap/layout_io.hpp"
#include "dbap/panner.hpp"
