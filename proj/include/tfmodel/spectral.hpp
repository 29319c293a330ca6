#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfmodel/errors.hpp"
#include "tfmodel/halfline.hpp"
#include "tfmodel/model.hpp"
#include "tfmodel/specialfn.hpp"

namespace tfmodel {

// e^{i pi/4}: direction of the spectrum segment; e^{i 3 pi/4}: its normal.
inline const cplx segment_direction = std::polar(1.0, 0.25 * pi);
inline const cplx normal_direction = std::polar(1.0, 0.75 * pi);
inline constexpr double segment_half_length = 0.70710678118654752440;
// |D(z, mu)| below this times (2|z|^2 + 1) counts as z being in the spectrum
inline constexpr double spectrum_eps = 1e-14;

struct spectrum_segment {
    static cplx endpoint_plus() { return segment_half_length * segment_direction; }
    static cplx endpoint_minus() { return -segment_half_length * segment_direction; }
};

struct resolvent_bounds {
    cplx z;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> numeric;
};

// zeta_+-(mu) = +- e^{i pi/4} (2 cosh pi mu)^{-1/2}
inline std::pair<cplx, cplx> eigenvalues(double mu)
{
    require_mu(mu, "eigenvalues");
    const double r = std::exp(-0.5 * (std::numbers::ln2 + log_cosh(pi * mu)));
    const cplx z = r * segment_direction;
    return {z, -z};
}

// D(z, mu) = z^2 - i / (2 cosh pi mu)
inline cplx determinant(cplx z, double mu)
{
    require_mu(mu, "determinant");
    const double c = std::exp(-(std::numbers::ln2 + log_cosh(pi * mu)));
    return z * z - cplx(0.0, c);
}

// dist(z^2, [0, i/2])
inline double dist_z2_to_segment(cplx z)
{
    const cplx w = z * z;
    const double s = std::clamp(w.imag(), 0.0, 0.5);
    return std::abs(w - cplx(0.0, s));
}

// Point-to-segment distance in C from z to [-e^{i pi/4}/sqrt2, e^{i pi/4}/sqrt2].
inline double dist_to_spectrum(cplx z)
{
    const cplx r = z * std::conj(segment_direction);
    const double p = std::clamp(r.real(), -segment_half_length, segment_half_length);
    return std::abs(r - p);
}

// Component of zeta across the segment line.
inline double transverse_deviation(cplx zeta)
{
    return std::fabs((zeta * std::conj(segment_direction)).imag());
}

inline void require_on_segment(cplx zeta, const char* where)
{
    constexpr double tol = 1e-12;
    if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()) ||
        transverse_deviation(zeta) > tol || std::abs(zeta) > segment_half_length + tol)
        throw argument_error(std::string(where) + ": zeta is not on the spectrum segment");
}

inline void require_delta(double delta, const char* where)
{
    if (!std::isfinite(delta) || delta < 0.0)
        throw argument_error(std::string(where) + ": require finite delta >= 0");
}

// z = zeta + side * delta * e^{i 3pi/4}
inline cplx normal_point(cplx zeta, double delta, int side)
{
    require_on_segment(zeta, "normal_point");
    require_delta(delta, "normal_point");
    if (side != 1 && side != -1)
        throw argument_error("normal_point: side must be +1 or -1");
    return zeta + static_cast<double>(side) * delta * normal_direction;
}

// dist(z^2, [0, i/2]) for z on the normal through zeta at distance delta.
inline double dist_on_normal(cplx zeta, double delta)
{
    require_on_segment(zeta, "dist_on_normal");
    require_delta(delta, "dist_on_normal");
    const double r = std::abs(zeta);
    return delta <= r ? 2.0 * r * delta : r * r + delta * delta;
}

/// Row-major 2x2 complex matrix.
using matrix2 = std::array<cplx, 4>;

struct two_by_two_norms {
    double norm = 0.0;                // s0
    std::optional<double> inv_norm;   // 1 / s1
    double trace_mm = 0.0;            // T = trace(M* M)
    double abs_det = 0.0;             // |det M|
};

// s^2 = (T +- sqrt(T^2 - 4|det|^2)) / 2; s1 taken as |det|/s0 to avoid cancellation.
inline two_by_two_norms two_by_two_norm(const matrix2& m)
{
    two_by_two_norms r;
    for (const auto& e : m)
        r.trace_mm += std::norm(e);
    r.abs_det = std::abs(m[0] * m[3] - m[1] * m[2]);
    const double disc = std::max(0.0, (r.trace_mm - 2.0 * r.abs_det) * (r.trace_mm + 2.0 * r.abs_det));
    const double s0sq = 0.5 * (r.trace_mm + std::sqrt(disc));
    r.norm = std::sqrt(s0sq);
    if (r.abs_det >= 1e-300)
        r.inv_norm = r.norm / r.abs_det;
    return r;
}

inline matrix2 shifted_model_matrix(cplx z, double mu)
{
    const auto f = model_matrix(mu);
    return {z, -f.f_plus_minus, -f.f_minus_plus, z};
}

namespace detail {

// ||(zI - F(mu))^{-1}|| from the 2x2 formula; mu = +inf gives the Jordan-cell limit.
inline double matrix_resolvent_norm(cplx z, double mu)
{
    const double az2 = std::norm(z);
    const double t = 2.0 * az2 + 1.0;
    const double d = std::isinf(mu) ? az2 : std::abs(determinant(z, mu));
    if (!(d > spectrum_eps * t))
        throw spectrum_hit("resolvent: z is an eigenvalue of F(mu)");
    const double s0sq = 0.5 * (t + std::sqrt(std::max(0.0, (t - 2.0 * d) * (t + 2.0 * d))));
    return std::sqrt(s0sq) / d;
}

} // namespace detail

inline resolvent_bounds resolvent_bounds_matrix(cplx z, double mu)
{
    require_mu(mu, "resolvent_bounds_matrix");
    const double d = std::abs(determinant(z, mu));
    const double t = 2.0 * std::norm(z) + 1.0;
    if (!(d > spectrum_eps * t))
        throw spectrum_hit("resolvent_bounds_matrix: z is an eigenvalue of F(mu)");
    resolvent_bounds b;
    b.z = z;
    b.upper = std::sqrt(t) / d;
    b.lower = std::sqrt(std::max(0.0, t / (d * d) - 2.0 / t));
    b.numeric = two_by_two_norm(shifted_model_matrix(z, mu)).inv_norm.value();
    return b;
}

/// sup over mu in [0, inf] of ||(zI - F(mu))^{-1}||: the grid nodes, the mu = inf
/// limit, and the mu where i/(2 cosh pi mu) is closest to z^2, followed by a
/// golden-section refinement around the best candidate.
inline double resolvent_norm_mu_sup(cplx z, const mu_grid& grid)
{
    std::vector<double> cand;
    cand.reserve(grid.size() + 2);
    for (std::size_t j = 0; j < grid.size(); ++j)
        cand.push_back(grid.mu(j));
    const double s = std::clamp((z * z).imag(), 0.0, 0.5);
    if (s > 0.0 && s < 0.5)
        cand.push_back(std::acosh(0.5 / s) / pi);
    std::sort(cand.begin(), cand.end());

    double best = detail::matrix_resolvent_norm(z, std::numeric_limits<double>::infinity());
    std::size_t arg = cand.size();
    for (std::size_t j = 0; j < cand.size(); ++j) {
        const double v = detail::matrix_resolvent_norm(z, cand[j]);
        if (v > best) {
            best = v;
            arg = j;
        }
    }
    if (arg == cand.size())
        return best;

    double lo = arg > 0 ? cand[arg - 1] : cand[arg];
    double hi = arg + 1 < cand.size() ? cand[arg + 1] : cand[arg] + std::max(grid.spacing(), 1e-3);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = detail::matrix_resolvent_norm(z, x1), f2 = detail::matrix_resolvent_norm(z, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = detail::matrix_resolvent_norm(z, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = detail::matrix_resolvent_norm(z, x1);
        }
    }
    return std::max({best, f1, f2});
}

// A(z) = (2|z|^2 + 1)^{1/2} / 2,  B(z) = 4 / (2|z|^2 + 1)^{3/2}
inline double bound_a(cplx z) { return 0.5 * std::sqrt(2.0 * std::norm(z) + 1.0); }
inline double bound_b(cplx z) { return 4.0 / std::pow(2.0 * std::norm(z) + 1.0, 1.5); }

inline resolvent_bounds resolvent_bounds_operator(cplx z, const mu_grid& grid)
{
    const double d = dist_z2_to_segment(z);
    const double t = 2.0 * std::norm(z) + 1.0;
    if (!(d > spectrum_eps * t))
        throw spectrum_hit("resolvent_bounds_operator: z lies on the spectrum");
    resolvent_bounds b;
    b.z = z;
    b.upper = std::sqrt(t) / d;
    b.lower = std::max(0.0, std::sqrt(t) / d - 2.0 * d / std::pow(t, 1.5));
    b.numeric = resolvent_norm_mu_sup(z, grid);
    return b;
}

// For zeta != 0 and delta > |zeta| only the upper bound is available; lower is 0 there.
inline resolvent_bounds resolvent_bounds_on_normal(cplx zeta, double delta, int side,
                                                   const mu_grid& grid)
{
    const cplx z = normal_point(zeta, delta, side);
    if (!(delta > 0.0))
        throw spectrum_hit("resolvent_bounds_on_normal: delta = 0 puts z on the spectrum");
    const double a = bound_a(z), bb = bound_b(z);
    const double r = std::abs(zeta);
    resolvent_bounds b;
    b.z = z;
    if (r > 0.0) {
        b.upper = a / (r * delta);
        b.lower = delta <= r ? std::max(0.0, b.upper - bb * r * delta) : 0.0;
    } else {
        b.upper = 2.0 * a / std::norm(z);
        b.lower = std::max(0.0, b.upper - bb);
    }
    b.numeric = resolvent_norm_mu_sup(z, grid);
    return b;
}

struct witness_row {
    double delta;
    double dist;
    double resolvent;
    double product;
};

struct witness_table {
    std::vector<witness_row> rows;
    std::optional<double> slope; // d log||R|| / d log delta, least squares
};

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw argument_error("loglog_slope: need at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw argument_error("loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (!(std::fabs(den) > 0.0))
        throw argument_error("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

/// Resolvent along the normal at 0, z = delta e^{i 3pi/4}.
inline witness_table non_normality_witness(const std::vector<double>& deltas, const mu_grid& grid)
{
    if (deltas.empty())
        throw argument_error("non_normality_witness: no deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!std::isfinite(deltas[i]) || !(deltas[i] > 0.0))
            throw argument_error("non_normality_witness: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw argument_error("non_normality_witness: deltas must be strictly decreasing");
    }
    witness_table t;
    std::vector<double> xs, ys;
    for (double d : deltas) {
        const cplx z = d * normal_direction;
        const double r = resolvent_norm_mu_sup(z, grid);
        t.rows.push_back({d, dist_to_spectrum(z), r, d * r});
        xs.push_back(d);
        ys.push_back(r);
    }
    if (xs.size() >= 2)
        t.slope = loglog_slope(xs, ys);
    return t;
}

/// {zeta_+-(mu_j)} plus the limit point 0.
inline std::vector<cplx> sampled_spectrum(const mu_grid& grid)
{
    std::vector<cplx> pts;
    pts.reserve(2 * grid.size() + 1);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto [p, m] = eigenvalues(grid.mu(j));
        pts.push_back(p);
        pts.push_back(m);
    }
    pts.push_back(0.0);
    return pts;
}

inline double max_transverse_deviation(const std::vector<cplx>& pts)
{
    double r = 0.0;
    for (const auto& p : pts)
        r = std::max({r, transverse_deviation(p), std::max(0.0, std::abs(p) - segment_half_length)});
    return r;
}

/// Hausdorff distance between a point set and the spectrum segment.
inline double hausdorff_to_segment(const std::vector<cplx>& pts)
{
    if (pts.empty())
        throw argument_error("hausdorff_to_segment: empty point set");
    double from_points = 0.0;
    std::vector<double> s;
    s.reserve(pts.size());
    for (const auto& p : pts) {
        from_points = std::max(from_points, dist_to_spectrum(p));
        s.push_back(std::clamp((p * std::conj(segment_direction)).real(), -segment_half_length,
                               segment_half_length));
    }
    std::sort(s.begin(), s.end());
    // Farthest segment point from the set: an endpoint or a midpoint of a gap.
    // Distances use the projections; the transverse part is bounded by from_points.
    double from_segment = std::max(s.front() + segment_half_length, segment_half_length - s.back());
    for (std::size_t i = 1; i < s.size(); ++i)
        from_segment = std::max(from_segment, 0.5 * (s[i] - s[i - 1]));
    return std::max(from_points, from_segment + from_points);
}

} // namespace tfmodel
