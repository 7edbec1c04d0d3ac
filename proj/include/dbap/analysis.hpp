#pragma once

// Trajectory generation, gain sweeps over trajectories, discontinuity
// metrics, and listener SPL heatmaps. Sweep and heatmap work is pure per
// sample, so it can be chunked across threads; output ordering is identical
// to serial execution either way.

#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "dbap/panner.hpp"

namespace dbap {

inline constexpr double kSplFloorDb = -120.0;
inline constexpr double kMinListenerDistance = 1e-6;

struct TrajectorySample {
    double theta = 0.0;
    Point position;
};

class Trajectory {
public:
    enum class Kind { spiral, circle, line };

    struct Spiral {
        double r_max = 0.0;
        double theta_end = 3.0 * std::numbers::pi;
        bool ccw = false;  // clockwise by default: the angle decreases
    };

    struct Circle {
        Point center;
        double radius = 0.0;
        bool ccw = false;
    };

    // Archimedean spiral from the origin, r(theta) = r_max * theta/theta_end.
    static Trajectory spiral(const Spiral& params, std::size_t n_samples) {
        require_samples(n_samples);
        if (!(params.r_max > 0.0)) throw ValidationError("spiral r_max must be positive");
        if (!(params.theta_end > 0.0)) {
            throw ValidationError("spiral theta_end must be positive");
        }
        std::vector<TrajectorySample> s;
        s.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double theta =
                params.theta_end * static_cast<double>(i) / static_cast<double>(n_samples - 1);
            const double r = params.r_max * theta / params.theta_end;
            const double sy = params.ccw ? std::sin(theta) : -std::sin(theta);
            s.push_back({theta, Point(r * std::cos(theta), r * sy)});
        }
        return Trajectory(Kind::spiral, std::move(s));
    }

    // Full circle around a fixed center, theta in [0, 2 pi]; theta = 0 sits
    // at center + (radius, 0). A 3-D center keeps its z.
    static Trajectory circle(const Circle& params, std::size_t n_samples) {
        require_samples(n_samples);
        if (!(params.radius > 0.0)) throw ValidationError("circle radius must be positive");
        std::vector<TrajectorySample> s;
        s.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(n_samples - 1);
            const double sy = params.ccw ? std::sin(theta) : -std::sin(theta);
            const double x = params.center.x() + params.radius * std::cos(theta);
            const double y = params.center.y() + params.radius * sy;
            s.push_back({theta, params.center.dims() == 3 ? Point(x, y, params.center.z())
                                                          : Point(x, y)});
        }
        return Trajectory(Kind::circle, std::move(s));
    }

    // Straight segment; theta is the normalized arc parameter scaled to 2 pi.
    static Trajectory line(const Point& start, const Point& end, std::size_t n_samples) {
        require_samples(n_samples);
        if (start.dims() != end.dims()) {
            throw ValidationError("line endpoints must share dimensionality");
        }
        std::vector<TrajectorySample> s;
        s.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n_samples - 1);
            const double x = start.x() + t * (end.x() - start.x());
            const double y = start.y() + t * (end.y() - start.y());
            const double theta = 2.0 * std::numbers::pi * t;
            if (start.dims() == 3) {
                s.push_back({theta, Point(x, y, start.z() + t * (end.z() - start.z()))});
            } else {
                s.push_back({theta, Point(x, y)});
            }
        }
        return Trajectory(Kind::line, std::move(s));
    }

    Kind kind() const { return kind_; }
    std::size_t size() const { return samples_.size(); }
    const std::vector<TrajectorySample>& samples() const { return samples_; }

private:
    Trajectory(Kind kind, std::vector<TrajectorySample> samples)
        : kind_(kind), samples_(std::move(samples)) {}

    static void require_samples(std::size_t n) {
        if (n < 2) throw ValidationError("trajectory needs at least two samples");
    }

    Kind kind_;
    std::vector<TrajectorySample> samples_;
};

// Default sweep extent: 1.35 x the layout circumradius measured from the
// reference, far enough that any layout's exterior region gets exercised.
inline double default_spiral_radius(const Layout& layout) {
    double r = 0.0;
    for (const Point& s : layout.speakers()) {
        r = std::max(r, distance(layout.reference(), s));
    }
    return 1.35 * r;
}

struct SweepRow {
    std::size_t sample = 0;
    double theta = 0.0;
    Point position;
    std::vector<double> gains;
    double power = 0.0;
    double p = 1.0;
    double hull_distance = 0.0;
};

struct SweepTable {
    std::size_t n_speakers = 0;
    std::size_t dims = 2;
    std::vector<SweepRow> rows;
};

namespace detail {

// Runs fn(i) for i in [0, n), chunked over up to n_threads threads. The
// first exception wins and is rethrown after all threads join.
template <typename Fn>
inline void parallel_for(std::size_t n, unsigned n_threads, Fn&& fn) {
    if (n_threads <= 1 || n < 2 * static_cast<std::size_t>(n_threads)) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::thread> workers;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// One row per trajectory sample, gains from the configured algorithm.
inline SweepTable sweep(const Layout& layout, const PannerConfig& config,
                        const Trajectory& trajectory, unsigned n_threads = 1) {
    const auto& samples = trajectory.samples();
    SweepTable table;
    table.n_speakers = layout.size();
    table.dims = layout.dims();
    table.rows.resize(samples.size());
    detail::parallel_for(samples.size(), n_threads, [&](std::size_t i) {
        GainFrame frame = compute_gains(layout, config, samples[i].position);
        table.rows[i] = SweepRow{i,
                                 samples[i].theta,
                                 samples[i].position,
                                 std::move(frame.gains),
                                 frame.total_power,
                                 frame.p,
                                 frame.hull_distance};
    });
    return table;
}

struct DiscontinuityMetrics {
    double max_gain_step = 0.0;
    double max_power_step = 0.0;
};

// Maxima over consecutive rows of |delta gain| (any speaker) and |delta power|.
inline DiscontinuityMetrics discontinuity_metric(const SweepTable& table) {
    if (table.rows.size() < 2) {
        throw ValidationError("discontinuity metric needs at least two rows");
    }
    DiscontinuityMetrics m;
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const SweepRow& prev = table.rows[r - 1];
        const SweepRow& cur = table.rows[r];
        m.max_power_step = std::max(m.max_power_step, std::abs(cur.power - prev.power));
        for (std::size_t s = 0; s < cur.gains.size(); ++s) {
            m.max_gain_step = std::max(m.max_gain_step, std::abs(cur.gains[s] - prev.gains[s]));
        }
    }
    return m;
}

// dB grid indexed by [incoming-angle bin][trajectory sample].
struct SplHeatmap {
    std::vector<double> source_angles;          // theta per trajectory sample
    std::vector<double> incoming_centers;       // bin centers in [0, pi]
    std::vector<std::vector<double>> cells_db;  // [bin][sample], floored at -120 dB
};

// SPL a listener would experience, as a function of the source position
// (columns) and the incoming angle of each speaker (rows, 0 = straight
// ahead, pi = behind). Speakers face the listener; intensity falls off as
// 1/d^2 from each speaker, and per-bin intensities add before the dB scale.
inline SplHeatmap spl_heatmap(const Layout& layout, const PannerConfig& config,
                              const Trajectory& trajectory, std::size_t n_bins,
                              std::optional<Point> listener = std::nullopt,
                              double facing = 0.0, unsigned n_threads = 1) {
    if (n_bins < 1) throw ValidationError("heatmap needs at least one bin");
    const Point lis = listener.value_or(layout.reference());
    detail::require_matching_dims(layout, lis);

    const double pi = std::numbers::pi;
    const double fx = std::cos(facing);
    const double fy = std::sin(facing);

    // per-speaker incoming-angle bin and listener distance are fixed
    std::vector<std::size_t> bin_of(layout.size());
    std::vector<double> inv_dist_sq(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const Point& s = layout.speakers()[i];
        const double len = distance(lis, s);
        double phi = 0.0;
        if (len >= kMinListenerDistance) {
            double dot = (s.x() - lis.x()) * fx + (s.y() - lis.y()) * fy;
            // the facing direction lies in the xy-plane; a 3-D z offset only
            // contributes to the angle through the length
            phi = std::acos(std::clamp(dot / len, -1.0, 1.0));
        }
        std::size_t bin = static_cast<std::size_t>(phi / pi * static_cast<double>(n_bins));
        bin_of[i] = std::min(bin, n_bins - 1);
        const double d = std::max(len, kMinListenerDistance);
        inv_dist_sq[i] = 1.0 / (d * d);
    }

    const auto& samples = trajectory.samples();
    SplHeatmap map;
    map.source_angles.resize(samples.size());
    map.incoming_centers.resize(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j) {
        map.incoming_centers[j] =
            (static_cast<double>(j) + 0.5) * pi / static_cast<double>(n_bins);
    }
    map.cells_db.assign(n_bins, std::vector<double>(samples.size(), kSplFloorDb));

    detail::parallel_for(samples.size(), n_threads, [&](std::size_t col) {
        map.source_angles[col] = samples[col].theta;
        const GainFrame frame = compute_gains(layout, config, samples[col].position);
        std::vector<double> intensity(n_bins, 0.0);
        for (std::size_t i = 0; i < layout.size(); ++i) {
            intensity[bin_of[i]] += frame.gains[i] * frame.gains[i] * inv_dist_sq[i];
        }
        for (std::size_t j = 0; j < n_bins; ++j) {
            if (intensity[j] > 0.0) {
                map.cells_db[j][col] = std::max(10.0 * std::log10(intensity[j]), kSplFloorDb);
            }
        }
    });
    return map;
}

}  // namespace dbap
