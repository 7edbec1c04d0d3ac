#pragma once

// The three distance-based gain laws.
//
//   original  v_i = k w_i / d_i^a, k chosen so the squared gains sum to 1.
//             Exterior sources are projected onto the convex hull of the
//             speakers and every gain is attenuated by the hull distance.
//   adbap     v_i = w_i / d_i^a with k fixed at 1; total power floats.
//   improved  k is scaled by p^(2a), where p clips the reference-to-source
//             distance against the power circle through the farthest
//             speaker; no hull is ever needed, and optional bias weights
//             b_i keep distant sources localized. Total power is p^(4a).
//
// All distances d_i carry the spatial blur r_s inside the metric; the
// distances entering p are plain Euclidean. Every function here is pure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "dbap/geometry.hpp"

namespace dbap {

enum class Algorithm { original, adbap, improved };

// Exterior gain scaling of the original algorithm: 1/(d+1)^2, or the
// rolloff-aware variant 1/(d+1)^(2a).
enum class ExteriorAttenuation { plus_one_squared, plus_one_2a };

// A blurred distance below this is treated as a source sitting on the
// speaker and takes the analytic d -> 0 limit of the gain laws.
inline constexpr double kCoincidentTol = 1e-12;

// Ordered speakers with per-speaker weights and a reference point.
// Gain index i refers to speaker i in construction order, always.
// Immutable after construction and freely shareable across threads.
class Layout {
public:
    explicit Layout(std::vector<Point> speakers)
        : Layout(std::move(speakers), {}, std::nullopt) {}

    Layout(std::vector<Point> speakers, std::vector<double> weights,
           std::optional<Point> reference)
        : speakers_(std::move(speakers)) {
        if (speakers_.empty()) {
            throw ValidationError("layout needs at least one speaker");
        }
        dims_ = speakers_.front().dims();
        for (const Point& p : speakers_) {
            if (p.dims() != dims_) {
                throw ValidationError("layout mixes 2-D and 3-D speaker positions");
            }
        }
        if (weights.empty()) {
            weights_.assign(speakers_.size(), 1.0);
        } else {
            if (weights.size() != speakers_.size()) {
                throw ValidationError("weight count does not match speaker count");
            }
            for (double w : weights) {
                if (!std::isfinite(w) || !(w > 0.0)) {
                    throw ValidationError("speaker weights must be positive and finite");
                }
            }
            weights_ = std::move(weights);
        }
        centroid_ = dbap::centroid(speakers_);
        if (reference) {
            if (reference->dims() != dims_) {
                throw ValidationError("reference dimensionality does not match the speakers");
            }
            reference_ = *reference;
        } else {
            reference_ = centroid_;
        }
    }

    std::size_t size() const { return speakers_.size(); }
    std::size_t dims() const { return dims_; }
    const std::vector<Point>& speakers() const { return speakers_; }
    const std::vector<double>& weights() const { return weights_; }
    const Point& reference() const { return reference_; }
    const Point& centroid() const { return centroid_; }

    // Copy with a different reference point (listener tracking).
    Layout with_reference(const Point& r) const {
        return Layout(speakers_, weights_, r);
    }

private:
    std::vector<Point> speakers_;
    std::vector<double> weights_;
    Point reference_;
    Point centroid_;
    std::size_t dims_ = 2;
};

inline double rolloff_coefficient(double rolloff_db) {
    if (!std::isfinite(rolloff_db) || !(rolloff_db > 0.0)) {
        throw ValidationError("rolloff must be a positive number of decibels");
    }
    return rolloff_db / (20.0 * std::log10(2.0));
}

// Spatial blur as a scalar of the mean centroid-to-speaker distance. Uses
// the geometric centroid, not the reference point, even when they differ.
inline double auto_blur(const Layout& layout, double r_scalar) {
    if (!std::isfinite(r_scalar) || !(r_scalar > 0.0)) {
        throw ValidationError("r_scalar must be positive");
    }
    double sum = 0.0;
    for (const Point& s : layout.speakers()) sum += distance(layout.centroid(), s);
    return sum / static_cast<double>(layout.size()) * r_scalar;
}

// Gain-law parameters. `blur` is the explicit spatial blur r_s; when unset
// it is derived from `blur_scalar` and the layout geometry.
struct PannerConfig {
    double rolloff_db = 6.0;
    std::optional<double> blur;
    double blur_scalar = 0.2;
    bool bias_enabled = false;
    Algorithm algorithm = Algorithm::improved;
    ExteriorAttenuation exterior_attenuation = ExteriorAttenuation::plus_one_squared;

    double resolve_blur(const Layout& layout) const {
        if (blur) {
            if (!std::isfinite(*blur)) throw ValidationError("spatial blur must be finite");
            return *blur;
        }
        return auto_blur(layout, blur_scalar);
    }
};

// Per-speaker gains for one source position plus derived diagnostics.
struct GainFrame {
    std::vector<double> gains;
    double total_power = 0.0;   // sum of squared gains
    double p = 1.0;             // power-circle factor (1 for original/adbap)
    double hull_distance = 0.0; // original algorithm, exterior branch only
};

namespace detail {

inline std::vector<double> blurred_distances(const Layout& layout, const Point& source,
                                             double r_s) {
    std::vector<double> d;
    d.reserve(layout.size());
    for (const Point& s : layout.speakers()) d.push_back(blurred_distance(source, s, r_s));
    return d;
}

inline std::vector<std::size_t> coincident_speakers(const std::vector<double>& dists) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        if (dists[i] < kCoincidentTol) idx.push_back(i);
    }
    return idx;
}

// d -> 0 limit shared by all the laws: speakers coincident with the source
// split the frame's power in proportion to their weights, everyone else is
// silent. For the normalized laws the frame power is p^(4a).
inline std::vector<double> coincident_limit_gains(const std::vector<double>& weights,
                                                  const std::vector<std::size_t>& coincident,
                                                  double p2a) {
    std::vector<double> v(weights.size(), 0.0);
    double wsq = 0.0;
    for (std::size_t j : coincident) wsq += weights[j] * weights[j];
    const double scale = p2a / std::sqrt(wsq);
    for (std::size_t j : coincident) v[j] = scale * weights[j];
    return v;
}

// v_i = k w_i b_i / d_i^a with k = p^(2a) / sqrt(sum b_i^2 w_i^2 / d_i^(2a)).
// The normalization makes the squared gains sum to exactly p^(4a).
inline std::vector<double> normalized_gains(const std::vector<double>& weights,
                                            const std::vector<double>& biases,
                                            const std::vector<double>& dists, double a,
                                            double p) {
    const std::size_t n = weights.size();
    const double p2a = std::pow(p, 2.0 * a);
    if (const auto coincident = coincident_speakers(dists); !coincident.empty()) {
        // biases cancel here: coincident speakers share one blurred distance
        return coincident_limit_gains(weights, coincident, p2a);
    }
    std::vector<double> v(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = weights[i] * biases[i] / std::pow(dists[i], a);
        sum += v[i] * v[i];
    }
    const double k = p2a / std::sqrt(sum);
    for (double& g : v) g *= k;
    return v;
}

// Bias parameter from precomputed blurred distances. The normalized
// distance gap maps the nearest speaker to 1 and the farthest to 0; with
// all distances equal the bias degenerates to a constant that the
// normalization cancels.
inline std::vector<double> bias_from_distances(const std::vector<double>& dists, double eps,
                                               double p) {
    const std::size_t n = dists.size();
    const auto [min_it, max_it] = std::minmax_element(dists.begin(), dists.end());
    const double d_min = *min_it;
    const double d_max = *max_it;

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ni = (d_min == d_max) ? 0.0 : (dists[i] - d_max) / (d_min - d_max);
        u[i] = ni * ni + eps;
    }

    // median-distance speaker: ceil(n/2)-th smallest, ties broken by index
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return dists[i] < dists[j] || (dists[i] == dists[j] && i < j);
    });
    const double u_m = u[order[(n + 1) / 2 - 1]];

    const double shape = 1.0 / p - 1.0;
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = u[i] / u_m * shape;
        b[i] = t * t + 1.0;
    }
    return b;
}

inline GainFrame make_frame(std::vector<double> gains, double p, double hull_distance) {
    GainFrame f;
    f.gains = std::move(gains);
    f.total_power = 0.0;
    for (double g : f.gains) f.total_power += g * g;
    f.p = p;
    f.hull_distance = hull_distance;
    return f;
}

inline void require_matching_dims(const Layout& layout, const Point& source) {
    if (source.dims() != layout.dims()) {
        throw ValidationError("source dimensionality does not match the layout");
    }
}

}  // namespace detail

// Ratio of the farthest-speaker distance to the reference-to-source
// distance, clipped to 1. Plain Euclidean distances, no blur: p is a purely
// geometric clip. A source on the reference yields 1.
inline double power_circle_factor(const Layout& layout, const Point& source) {
    detail::require_matching_dims(layout, source);
    double max_ds = 0.0;
    for (const Point& s : layout.speakers()) {
        max_ds = std::max(max_ds, distance(layout.reference(), s));
    }
    const double d_rs = distance(layout.reference(), source);
    if (d_rs == 0.0) return 1.0;
    const double q = max_ds / d_rs;
    return q < 1.0 ? q : 1.0;
}

// Bias weights b_i >= 1 pushing gain toward speakers nearer than the median
// one. At p = 1 every b_i is 1; the farthest speaker always gets the
// minimum. epsilon defaults to |r_s|/N and keeps the farthest speaker
// audible; with zero blur it falls back to 1e-9.
inline std::vector<double> bias_weights(const Layout& layout, const PannerConfig& config,
                                        const Point& source, double p) {
    if (!std::isfinite(p) || !(p > 0.0) || p > 1.0) {
        throw ValidationError("power-circle factor must lie in (0, 1]");
    }
    detail::require_matching_dims(layout, source);
    const double r_s = config.resolve_blur(layout);
    double eps = std::abs(r_s) / static_cast<double>(layout.size());
    if (eps == 0.0) eps = 1e-9;
    return detail::bias_from_distances(detail::blurred_distances(layout, source, r_s), eps,
                                       p);
}

inline GainFrame gains_adbap(const Layout& layout, const PannerConfig& config,
                             const Point& source) {
    detail::require_matching_dims(layout, source);
    const double a = rolloff_coefficient(config.rolloff_db);
    const double r_s = config.resolve_blur(layout);
    const std::vector<double> d = detail::blurred_distances(layout, source, r_s);
    std::vector<double> v;
    if (const auto coincident = detail::coincident_speakers(d); !coincident.empty()) {
        v = detail::coincident_limit_gains(layout.weights(), coincident, 1.0);
    } else {
        v.resize(layout.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = layout.weights()[i] / std::pow(d[i], a);
        }
    }
    return detail::make_frame(std::move(v), 1.0, 0.0);
}

inline GainFrame gains_dbap_original(const Layout& layout, const PannerConfig& config,
                                     const Point& source) {
    if (layout.dims() != 2 || source.dims() != 2) {
        throw UnsupportedDimensionError(
            "the original algorithm handles 2-D layouts only; use the improved algorithm "
            "for 3-D");
    }
    const double a = rolloff_coefficient(config.rolloff_db);
    const double r_s = config.resolve_blur(layout);
    const std::vector<double> ones(layout.size(), 1.0);
    const Hull2D hull = convex_hull_2d(layout.speakers());

    if (hull.contains(source)) {
        auto v = detail::normalized_gains(
            layout.weights(), ones, detail::blurred_distances(layout, source, r_s), a, 1.0);
        return detail::make_frame(std::move(v), 1.0, 0.0);
    }

    const Hull2D::Projection proj = hull.project(source);
    auto v = detail::normalized_gains(
        layout.weights(), ones, detail::blurred_distances(layout, proj.point, r_s), a, 1.0);
    const double base = proj.distance + 1.0;
    const double att = config.exterior_attenuation == ExteriorAttenuation::plus_one_squared
                           ? 1.0 / (base * base)
                           : 1.0 / std::pow(base, 2.0 * a);
    for (double& g : v) g *= att;
    return detail::make_frame(std::move(v), 1.0, proj.distance);
}

inline GainFrame gains_dbap_improved(const Layout& layout, const PannerConfig& config,
                                     const Point& source) {
    detail::require_matching_dims(layout, source);
    const double a = rolloff_coefficient(config.rolloff_db);
    const double r_s = config.resolve_blur(layout);
    const double p = power_circle_factor(layout, source);
    if (p == 0.0) {
        // zero-radius power circle (lone speaker on the reference): silence
        return detail::make_frame(std::vector<double>(layout.size(), 0.0), 0.0, 0.0);
    }
    std::vector<double> biases;
    const std::vector<double> d = detail::blurred_distances(layout, source, r_s);
    if (config.bias_enabled) {
        double eps = std::abs(r_s) / static_cast<double>(layout.size());
        if (eps == 0.0) eps = 1e-9;
        biases = detail::bias_from_distances(d, eps, p);
    } else {
        biases.assign(layout.size(), 1.0);
    }
    auto v = detail::normalized_gains(layout.weights(), biases, d, a, p);
    return detail::make_frame(std::move(v), p, 0.0);
}

inline GainFrame compute_gains(const Layout& layout, const PannerConfig& config,
                               const Point& source) {
    switch (config.algorithm) {
        case Algorithm::original: return gains_dbap_original(layout, config, source);
        case Algorithm::adbap: return gains_adbap(layout, config, source);
        case Algorithm::improved: return gains_dbap_improved(layout, config, source);
    }
    throw ValidationError("unknown algorithm selector");
}

}  // namespace dbap
