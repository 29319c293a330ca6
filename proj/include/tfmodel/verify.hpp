#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tfmodel/config.hpp"
#include "tfmodel/halfline.hpp"
#include "tfmodel/io.hpp"
#include "tfmodel/model.hpp"
#include "tfmodel/operator.hpp"
#include "tfmodel/spectral.hpp"
#include "tfmodel/specialfn.hpp"
#include "tfmodel/unitary.hpp"

namespace tfmodel {

// One line of a verification report. For "at_least" checks the value must
// reach the tolerance from above; otherwise it must stay at or below it.
struct check_result {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

inline check_result at_most(std::string name, double value, double tol, std::string detail = {})
{
    return {std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(detail)};
}

inline check_result at_least(std::string name, double value, double tol, std::string detail = {})
{
    return {std::move(name), value, tol, std::isfinite(value) && value >= tol, std::move(detail)};
}

// e_a for every configured amplitude plus two Gaussian bumps in eta.
inline std::vector<std::pair<std::string, halfline_function>> standard_test_set(
    const run_config& c, const log_grid& g)
{
    std::vector<std::pair<std::string, halfline_function>> set;
    for (double a : c.amplitudes)
        set.emplace_back("e_" + fmt_short(a), exp_fn(a, g));
    set.emplace_back("bump(0,1)", gaussian_eta_bump(0.0, 1.0, g));
    set.emplace_back("bump(-3,0.5)", gaussian_eta_bump(-3.0, 0.5, g));
    return set;
}

// |Gamma(1/2+i mu) Gamma(1/2-i mu) cosh(pi mu) / pi - 1| on 300 points of [0, 30].
inline check_result check_reflection(const run_config& c)
{
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const critical_line_point p(30.0 * i / 299.0);
        const cplx lp = log_gamma_critical(p, +1), lm = log_gamma_critical(p, -1);
        const cplx ratio = std::exp(lp + lm - (std::log(pi) - log_cosh(pi * p.mu())));
        worst = std::max(worst, std::abs(ratio - 1.0));
    }
    return at_most("reflection_identity", worst, c.tol.identity);
}

// exp(2 Re log Gamma(1/2+i mu)) against the closed form |Gamma|^2, mu in [0, 30].
inline check_result check_abs_gamma(const run_config& c)
{
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const critical_line_point p(30.0 * i / 299.0);
        const double lhs = 2.0 * log_gamma_critical(p, +1).real();
        worst = std::max(worst, std::fabs(std::expm1(lhs - log_abs_gamma_sq(p))));
        const double direct = abs_gamma_sq(p);
        worst = std::max(worst, std::fabs(std::exp(lhs) - direct) / direct);
    }
    return at_most("abs_gamma_sq_consistency", worst, c.tol.identity);
}

// |F+-|^2 = 1/(1+e^{2 pi mu}), |F-+|^2 = 1/(1+e^{-2 pi mu}), their sum = 1 and
// F+- F-+ = i/(2 cosh pi mu), all relative, over the configured mu grid.
inline check_result check_entry_identities(const run_config& c)
{
    const auto mu = c.mus();
    double worst = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const double m = mu.mu(j);
        const auto f = model_matrix(m);
        const double a = std::norm(f.f_plus_minus), b = std::norm(f.f_minus_plus);
        const double ea = 1.0 / (1.0 + std::exp(2.0 * pi * m));
        const double eb = 1.0 / (1.0 + std::exp(-2.0 * pi * m));
        const cplx prod_expected(0.0, 0.5 * std::exp(-log_cosh(pi * m)));
        worst = std::max({worst, std::fabs(a - ea) / ea, std::fabs(b - eb) / eb,
                          std::fabs(a + b - 1.0),
                          std::abs(f.f_plus_minus * f.f_minus_plus - prod_expected) /
                              std::abs(prod_expected),
                          std::fabs(std::sqrt(b) - matrix_norm(m))});
    }
    return at_most("model_entry_identities", worst, c.tol.identity);
}

inline check_result check_parseval(const run_config& c)
{
    const auto g = c.grid();
    const auto mu = c.mus();
    double worst = 0.0;
    std::string which;
    for (const auto& [name, x] : standard_test_set(c, g)) {
        const double d = parseval_defect(x, mu);
        if (!(d <= worst)) {
            worst = d;
            which = name;
        }
    }
    return at_most("parseval_defect", worst, c.tol.parseval, "worst: " + which);
}

// Defect ratio for e_1 between n = parseval_coarse_n and 2 n on the configured window.
inline check_result check_parseval_shrink(const run_config& c)
{
    const auto mu = c.mus();
    const log_grid g0(c.eta_min, c.eta_max, c.parseval_coarse_n);
    const log_grid g1(c.eta_min, c.eta_max, 2 * c.parseval_coarse_n);
    const double d0 = parseval_defect(exp_fn(1.0, g0), mu);
    const double d1 = parseval_defect(exp_fn(1.0, g1), mu);
    const double ratio = d0 / std::max(d1, 1e-300);
    return at_least("parseval_shrink_ratio", ratio, c.tol.parseval_shrink,
                    "n=" + std::to_string(c.parseval_coarse_n) + ": " + fmt_short(d0) +
                        ", n=" + std::to_string(2 * c.parseval_coarse_n) + ": " + fmt_short(d1));
}

// ||U^{-1} U x - x|| / ||x|| over the standard set.
inline check_result check_roundtrip(const run_config& c)
{
    const auto g = c.grid();
    const auto mu = c.mus();
    double worst = 0.0;
    std::string which;
    for (const auto& [name, x] : standard_test_set(c, g)) {
        const auto back = inverse_u(forward_u(x, mu), g);
        const double d = norm(back - x) / norm(x);
        if (!(d <= worst)) {
            worst = d;
            which = name;
        }
    }
    return at_most("roundtrip_defect", worst, c.tol.roundtrip, "worst: " + which);
}

inline check_result check_model_closed(const run_config& c)
{
    const mu_grid mu(10.0, 1001);
    double worst = 0.0;
    for (double a : c.amplitudes)
        worst = std::max(worst, model_identity_defect_closed(a, mu));
    return at_most("model_identity_closed_form", worst, c.tol.model_closed);
}

inline std::vector<check_result> check_model_numeric(const run_config& c)
{
    const auto g = c.grid();
    const auto mu = c.mus();
    const double d = model_identity_defect(exp_fn(1.0, g), mu);
    const log_grid half(c.eta_min, c.eta_max, std::max<std::size_t>(2, c.n / 2));
    const double dh = model_identity_defect(exp_fn(1.0, half), mu);
    std::vector<check_result> out;
    out.push_back(at_most("model_identity_numeric", d, c.tol.model_numeric));
    out.push_back(at_least("model_identity_numeric_decrease", dh / d, 1.0,
                           "n/2: " + fmt_short(dh) + ", n: " + fmt_short(d)));
    return out;
}

inline std::vector<check_result> check_spectrum(const run_config& c)
{
    const auto pts = sampled_spectrum(c.mus());
    std::vector<check_result> out;
    out.push_back(at_most("spectrum_transverse", max_transverse_deviation(pts), c.tol.transverse));
    out.push_back(at_most("spectrum_hausdorff", hausdorff_to_segment(pts), c.tol.hausdorff));
    // |zeta_+| strictly decreasing along the grid
    const auto mu = c.mus();
    std::size_t breaks = 0;
    for (std::size_t j = 1; j < mu.size(); ++j)
        if (!(std::abs(eigenvalues(mu.mu(j)).first) < std::abs(eigenvalues(mu.mu(j - 1)).first)))
            ++breaks;
    out.push_back(at_most("eigenvalue_monotone_breaks", static_cast<double>(breaks), 0.0));
    return out;
}

inline check_result check_spectral_radius(const run_config& c)
{
    const auto A = build_dense(c.dense_grid());
    const double r = spectral_radius_estimate(A);
    return at_most("spectral_radius", std::fabs(r - std::sqrt(0.5)), c.tol.radius,
                   "estimate " + fmt_short(r) + " at n=" + std::to_string(c.dense_n));
}

inline check_result check_operator_norm(const run_config& c)
{
    const auto A = build_dense(c.dense_grid());
    const double s = operator_norm_estimate(A);
    check_result r{"operator_norm", s, c.tol.norm_high,
                   s >= c.tol.norm_low && s <= c.tol.norm_high,
                   "interval [" + fmt_short(c.tol.norm_low) + ", " + fmt_short(c.tol.norm_high) +
                       "] at n=" + std::to_string(c.dense_n)};
    return r;
}

// Points of the configured z grid; those closer than `gap` to the segment are dropped.
inline std::vector<cplx> z_grid_points(const z_grid_spec& s, double gap)
{
    std::vector<cplx> pts;
    const auto coord = [&](double lo, double hi, std::size_t i) {
        return s.steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(s.steps - 1);
    };
    for (std::size_t i = 0; i < s.steps; ++i)
        for (std::size_t k = 0; k < s.steps; ++k) {
            const cplx z(coord(s.re_min, s.re_max, k), coord(s.im_min, s.im_max, i));
            if (dist_to_spectrum(z) >= gap)
                pts.push_back(z);
        }
    return pts;
}

// max over the grid of (lower - numeric)/upper and (numeric - upper)/upper.
inline check_result check_resolvent_sandwich(const run_config& c)
{
    const auto mu = c.mus();
    double worst = -1.0;
    std::size_t count = 0;
    for (const cplx z : z_grid_points(c.z_grid, c.tol.segment_gap)) {
        const auto b = resolvent_bounds_operator(z, mu);
        const double v = *b.numeric;
        worst = std::max({worst, (b.lower - v) / b.upper, (v - b.upper) / b.upper});
        ++count;
    }
    return at_most("resolvent_sandwich_violation", worst, c.tol.sandwich,
                   std::to_string(count) + " points");
}

// Quadratic least-squares fit of y(x); returns the value at x = 0.
inline double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw argument_error("extrapolate_to_zero: need at least two points");
    const std::size_t deg = std::min<std::size_t>(2, x.size() - 1);
    // normal equations, at most 3x3
    double m[3][4] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p[3] = {1.0, x[i], x[i] * x[i]};
        for (std::size_t r = 0; r <= deg; ++r) {
            for (std::size_t q = 0; q <= deg; ++q)
                m[r][q] += p[r] * p[q];
            m[r][3] += p[r] * y[i];
        }
    }
    const std::size_t k = deg + 1;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col]))
                piv = r;
        std::swap(m[col], m[piv]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col)
                continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t q = col; q < 4; ++q)
                m[r][q] -= f * m[col][q];
        }
    }
    return m[0][3] / m[0][0];
}

inline std::vector<check_result> check_normal_line(const run_config& c)
{
    const auto mu = c.mus();
    double bracket = -1.0, extrap = 0.0;
    for (double r : {0.1, 0.3, 0.5}) {
        const cplx zeta = r * segment_direction;
        const double target = bound_a(zeta) / r;
        for (int side : {+1, -1}) {
            std::vector<double> ds, ps;
            for (double f : {0.5, 0.2, 0.1, 0.05}) {
                const double delta = f * r;
                const auto b = resolvent_bounds_on_normal(zeta, delta, side, mu);
                const double v = *b.numeric;
                bracket = std::max({bracket, (b.lower - v) / b.upper, (v - b.upper) / b.upper});
                ds.push_back(delta);
                ps.push_back(delta * v);
            }
            extrap = std::max(extrap, std::fabs(extrapolate_to_zero(ds, ps) - target) / target);
        }
    }
    return {at_most("normal_line_bracket_violation", bracket, c.tol.sandwich),
            at_most("normal_line_extrapolation", extrap, c.tol.extrapolation)};
}

inline std::vector<check_result> check_witness(const run_config& c)
{
    const auto t = non_normality_witness(c.witness_deltas, c.mus());
    std::vector<check_result> out;
    if (t.slope)
        out.push_back(at_most("witness_slope_deviation", std::fabs(*t.slope + 2.0), c.tol.slope,
                              "slope " + fmt_short(*t.slope)));
    std::size_t breaks = 0;
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        if (!(t.rows[i].product > t.rows[i - 1].product))
            ++breaks;
    out.push_back(at_most("witness_product_monotone_breaks", static_cast<double>(breaks), 0.0));
    return out;
}

// T/2 <= s0^2 <= T and T/D^2 - 2/T <= s1^{-2} <= T/D^2 on random 2x2 matrices.
inline check_result check_two_by_two_norms(const run_config& c, std::size_t samples = 1000,
                                          std::uint64_t seed = 20240611)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    double worst = -1.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double scale = std::pow(10.0, expo(rng));
        matrix2 m;
        for (auto& e : m)
            e = scale * cplx(gauss(rng), gauss(rng));
        const auto r = two_by_two_norm(m);
        const double t = r.trace_mm, s0sq = r.norm * r.norm;
        worst = std::max({worst, (0.5 * t - s0sq) / t, (s0sq - t) / t});
        if (r.inv_norm) {
            const double d2 = r.abs_det * r.abs_det;
            const double inv2 = *r.inv_norm * *r.inv_norm;
            const double hi = t / d2, lo = hi - 2.0 / t;
            worst = std::max({worst, (lo - inv2) / hi, (inv2 - hi) / hi});
        }
    }
    return at_most("two_by_two_norm_violation", worst, c.tol.identity,
                   std::to_string(samples) + " random matrices");
}

} // namespace tfmodel
