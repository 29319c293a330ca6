#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <lapacke.h>
#include <json.hpp>

#include "tfmodel/errors.hpp"
#include "tfmodel/halfline.hpp"
#include "tfmodel/specialfn.hpp"

namespace tfmodel {

/// Quadrature used for the truncated Fourier integral.
///
/// trapezoid: trapezoid in eta (the Nystrom rule), accurate while t*xi*h stays
///   well below 2 pi on the support of x.
/// product_linear: x interpolated linearly in xi between nodes (zero outside
///   the grid) and the kernel e^{i t xi} integrated exactly on every panel, so
///   the result is the exact transform of the interpolant for every t.
enum class quadrature_rule { trapezoid, product_linear };

namespace detail {

// int_0^1 (1-s) e^{i th s} ds and int_0^1 s e^{i th s} ds for small |th|.
inline std::pair<cplx, cplx> linear_panel_moments_series(double th)
{
    cplx alpha = 0.0, beta = 0.0;
    cplx term = 1.0; // (i th)^k / k!
    for (int k = 0; k < 30; ++k) {
        alpha += term / static_cast<double>((k + 1) * (k + 2));
        beta += term / static_cast<double>(k + 2);
        term *= cplx(0.0, th) / static_cast<double>(k + 1);
        if (std::abs(term) < 1e-18)
            break;
    }
    return {alpha, beta};
}

// (2pi)^{-1/2} int x(xi) e^{i t xi} dxi for every t in ts.
inline std::vector<cplx> truncated_fourier(const halfline_function& x, std::span<const double> ts,
                                           quadrature_rule rule)
{
    const auto& g = x.grid();
    const std::size_t n = g.size();
    const auto xi = g.xis();
    std::vector<cplx> out(ts.size());

    if (rule == quadrature_rule::trapezoid) {
        std::vector<cplx> xw(n);
        for (std::size_t k = 0; k < n; ++k)
            xw[k] = x[k] * g.weight(k);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += xw[k] * std::polar(1.0, ts[j] * xi[k]);
            out[j] = acc / sqrt_2pi;
        }
        return out;
    }

    std::vector<cplx> phase(n);
    for (std::size_t j = 0; j < ts.size(); ++j) {
        const double t = ts[j];
        for (std::size_t k = 0; k < n; ++k)
            phase[k] = std::polar(1.0, t * xi[k]);
        cplx acc = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double d = xi[k + 1] - xi[k];
            const double th = t * d;
            const cplx fa = x[k], fb = x[k + 1];
            if (std::fabs(th) < 1.0) {
                const auto [alpha, beta] = linear_panel_moments_series(th);
                acc += d * phase[k] * (fa * alpha + fb * beta);
            } else {
                // integration by parts, exact for linear f
                const cplx slope = (fb - fa) / d;
                acc += (fb * phase[k + 1] - fa * phase[k]) / cplx(0.0, t) +
                       slope * (phase[k + 1] - phase[k]) / (t * t);
            }
        }
        out[j] = acc / sqrt_2pi;
    }
    return out;
}

inline halfline_function truncated_fourier_on_grid(const halfline_function& x, int sign,
                                                   quadrature_rule rule)
{
    auto ts = x.grid().xis();
    for (auto& t : ts)
        t *= sign;
    return halfline_function(x.grid(), truncated_fourier(x, ts, rule));
}

} // namespace detail

/// (F_{R+} x)(t) = (2pi)^{-1/2} int_{R+} x(xi) e^{i t xi} dxi at every grid node.
/// O(n^2) direct summation.
inline halfline_function apply_trunc_fourier(const halfline_function& x,
                                             quadrature_rule rule = quadrature_rule::trapezoid)
{
    return detail::truncated_fourier_on_grid(x, +1, rule);
}

/// Same integral at arbitrary points t (not restricted to grid nodes).
inline std::vector<cplx> trunc_fourier_at(const halfline_function& x, std::span<const double> ts,
                                          quadrature_rule rule = quadrature_rule::trapezoid)
{
    return detail::truncated_fourier(x, ts, rule);
}

/// Adjoint: kernel e^{-i t xi}.
inline halfline_function apply_adjoint(const halfline_function& x,
                                       quadrature_rule rule = quadrature_rule::trapezoid)
{
    return detail::truncated_fourier_on_grid(x, -1, rule);
}

inline void require_positive_amplitude(double a, const char* where)
{
    if (!std::isfinite(a) || !(a > 0.0))
        throw argument_error(std::string(where) + ": require a > 0");
}

inline void require_mu(double mu, const char* where)
{
    if (!std::isfinite(mu) || mu < 0.0)
        throw argument_error(std::string(where) + ": require finite mu >= 0");
}

inline int channel_sign(int channel, const char* where)
{
    if (channel != 1 && channel != -1)
        throw argument_error(std::string(where) + ": channel must be +1 or -1");
    return channel;
}

/// F_{R+} e_a evaluated in closed form: (2pi)^{-1/2} / (a - i t).
inline cplx trunc_fourier_exp_closed(double a, double t)
{
    require_positive_amplitude(a, "trunc_fourier_exp_closed");
    return 1.0 / (sqrt_2pi * cplx(a, -t));
}

/// Closed form of the U-image of e_a in the normalization without the
/// (2pi)^{-1/2} prefactor: a^{-1/2 -+ i mu} Gamma(1/2 +- i mu) for channel +-.
/// forward_u(e_a) equals this value divided by sqrt(2 pi).
inline cplx u_exp_closed(double a, double mu, int channel)
{
    require_positive_amplitude(a, "u_exp_closed");
    require_mu(mu, "u_exp_closed");
    const int s = channel_sign(channel, "u_exp_closed");
    const cplx expo = cplx(-0.5, -s * mu) * std::log(a) +
                      log_gamma_critical(critical_line_point(mu), s);
    return std::exp(expo);
}

/// Closed form of the U-image of F_{R+} e_a (same normalization as u_exp_closed):
/// sqrt(pi/2) e^{i pi/4} a^{-1/2 +- i mu} e^{-+ pi mu/2} / cosh(pi mu).
inline cplx u_trunc_fourier_exp_closed(double a, double mu, int channel)
{
    require_positive_amplitude(a, "u_trunc_fourier_exp_closed");
    require_mu(mu, "u_trunc_fourier_exp_closed");
    const int s = channel_sign(channel, "u_trunc_fourier_exp_closed");
    const double re = 0.5 * std::log(0.5 * pi) - 0.5 * std::log(a) - s * 0.5 * pi * mu -
                      log_cosh(pi * mu);
    const double im = 0.25 * pi + s * mu * std::log(a);
    return std::exp(cplx(re, im));
}

/// Symmetrized Nystrom matrix A[j,k] = (2pi)^{-1/2} e^{i xi_j xi_k} sqrt(w_j w_k),
/// acting on weight-normalized coefficients c_k = sqrt(w_k) x_k.
class dense_operator {
public:
    dense_operator(log_grid grid, std::vector<cplx> entries)
        : grid_(std::move(grid)), entries_(std::move(entries))
    {
        if (entries_.size() != grid_.size() * grid_.size())
            throw argument_error("dense_operator: entry count is not n*n");
        for (const auto& e : entries_)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
                throw argument_error("dense_operator: non-finite entry");
    }

    const log_grid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return grid_.size(); }
    const std::vector<cplx>& entries() const noexcept { return entries_; }
    cplx operator()(std::size_t j, std::size_t k) const noexcept
    {
        return entries_[j * dim() + k];
    }

    std::vector<cplx> apply(std::span<const cplx> c) const
    {
        const std::size_t n = dim();
        if (c.size() != n)
            throw argument_error("dense_operator::apply: vector length mismatch");
        std::vector<cplx> out(n);
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            const cplx* row = entries_.data() + j * n;
            for (std::size_t k = 0; k < n; ++k)
                acc += row[k] * c[k];
            out[j] = acc;
        }
        return out;
    }

    std::vector<cplx> apply_adjoint(std::span<const cplx> c) const
    {
        const std::size_t n = dim();
        if (c.size() != n)
            throw argument_error("dense_operator::apply_adjoint: vector length mismatch");
        std::vector<cplx> out(n);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx* row = entries_.data() + j * n;
            for (std::size_t k = 0; k < n; ++k)
                out[k] += std::conj(row[k]) * c[j];
        }
        return out;
    }

    dense_operator scaled(cplx s) const
    {
        auto e = entries_;
        for (auto& v : e)
            v *= s;
        return dense_operator(grid_, std::move(e));
    }

private:
    log_grid grid_;
    std::vector<cplx> entries_;
};

inline constexpr std::size_t default_dense_cap = 4096;

inline dense_operator build_dense(const log_grid& grid, std::size_t cap = default_dense_cap)
{
    const std::size_t n = grid.size();
    if (n > cap)
        throw argument_error("build_dense: grid size " + std::to_string(n) +
                             " exceeds the dense cap " + std::to_string(cap));
    const auto xi = grid.xis();
    std::vector<double> sw(n);
    for (std::size_t k = 0; k < n; ++k)
        sw[k] = std::sqrt(grid.weight(k));
    std::vector<cplx> e(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            e[j * n + k] = std::polar(sw[j] * sw[k] / sqrt_2pi, xi[j] * xi[k]);
    return dense_operator(grid, std::move(e));
}

// c_k = sqrt(w_k) x_k.
inline std::vector<cplx> weight_normalized(const halfline_function& x)
{
    std::vector<cplx> c(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        c[k] = std::sqrt(x.grid().weight(k)) * x[k];
    return c;
}

/// Largest singular value of A by power iteration on A*A. The top singular
/// values of the finite section cluster just below 1, so convergence is slow;
/// the iterate approaches the norm from below.
inline double operator_norm_estimate(const dense_operator& A, double rel_tol = 1e-8,
                                     int max_iter = 5000)
{
    const std::size_t n = A.dim();
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k < n; ++k)
        v[k] = cplx(1.0 + 0.25 * std::sin(0.7 * static_cast<double>(k)),
                    0.5 * std::cos(1.3 * static_cast<double>(k)));
    auto normalize = [](std::vector<cplx>& w) {
        double s = 0.0;
        for (const auto& c : w)
            s += std::norm(c);
        s = std::sqrt(s);
        for (auto& c : w)
            c /= s;
        return s;
    };
    normalize(v);
    double est = 0.0;
    double change = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        auto w = A.apply_adjoint(A.apply(v));
        const double lambda = normalize(w); // ||A*A v|| -> sigma_max^2
        const double next = std::sqrt(lambda);
        change = std::fabs(next - est) / next;
        est = next;
        v = std::move(w);
        if (change < rel_tol)
            return est;
    }
    throw non_convergence("operator_norm_estimate: power iteration did not converge", max_iter,
                          change);
}

/// Modulus of the largest-modulus eigenvalue of A (dense LAPACK eigensolve).
inline double spectral_radius_estimate(const dense_operator& A)
{
    const auto n = static_cast<lapack_int>(A.dim());
    std::vector<lapack_complex_double> a(A.entries().size());
    std::memcpy(a.data(), A.entries().data(), sizeof(cplx) * a.size());
    std::vector<lapack_complex_double> w(static_cast<std::size_t>(n));
    lapack_complex_double dummy{};
    const lapack_int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                                          &dummy, n, &dummy, n);
    if (info != 0)
        throw non_convergence("spectral_radius_estimate: zgeev failed with info=" +
                                  std::to_string(info),
                              0, 0.0);
    double r = 0.0;
    for (const auto& ev : w)
        r = std::max(r, std::abs(reinterpret_cast<const cplx&>(ev)));
    return r;
}

namespace detail {

// All singular values of a row-major n x n matrix, descending (LAPACK zgesdd).
inline std::vector<double> singular_values(std::vector<cplx> m, std::size_t n)
{
    const auto ln = static_cast<lapack_int>(n);
    std::vector<double> s(n);
    lapack_complex_double dummy{};
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'N', ln, ln, reinterpret_cast<lapack_complex_double*>(m.data()),
                       ln, s.data(), &dummy, ln, &dummy, ln);
    if (info != 0)
        throw non_convergence("singular_values: zgesdd failed with info=" + std::to_string(info), 0,
                              0.0);
    return s;
}

} // namespace detail

/// 1 / sigma_min(zI - A): inverse iteration on (M* M)^{-1} with an LU
/// factorization. When the smallest singular values cluster and the iteration
/// stalls, the answer comes from a full singular value decomposition instead.
inline double resolvent_norm_numeric(const dense_operator& A, cplx z, double rel_tol = 1e-10,
                                     int max_iter = 300)
{
    const auto n = static_cast<lapack_int>(A.dim());
    const auto nn = static_cast<std::size_t>(n);
    std::vector<cplx> m(nn * nn);
    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t k = 0; k < nn; ++k)
            m[j * nn + k] = (j == k ? z : cplx(0.0)) - A(j, k);
    const auto shifted = m;
    auto* mp = reinterpret_cast<lapack_complex_double*>(m.data());
    std::vector<lapack_int> piv(nn);
    lapack_int info = LAPACKE_zgetrf(LAPACK_ROW_MAJOR, n, n, mp, n, piv.data());
    if (info > 0)
        throw singular_matrix("resolvent_norm_numeric: zI - A is exactly singular");
    if (info < 0)
        throw argument_error("resolvent_norm_numeric: zgetrf argument error");

    std::vector<cplx> v(nn);
    for (std::size_t k = 0; k < nn; ++k)
        v[k] = cplx(1.0, 0.1 * static_cast<double>(k % 7));
    double est = 0.0, change = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        double s = 0.0;
        for (const auto& c : v)
            s += std::norm(c);
        s = std::sqrt(s);
        for (auto& c : v)
            c /= s;
        // v <- M^{-1} M^{-*} v
        auto* vp = reinterpret_cast<lapack_complex_double*>(v.data());
        info = LAPACKE_zgetrs(LAPACK_ROW_MAJOR, 'C', n, 1, mp, n, piv.data(), vp, 1);
        if (info == 0)
            info = LAPACKE_zgetrs(LAPACK_ROW_MAJOR, 'N', n, 1, mp, n, piv.data(), vp, 1);
        if (info != 0)
            throw singular_matrix("resolvent_norm_numeric: zgetrs failed");
        double g = 0.0;
        for (const auto& c : v)
            g += std::norm(c);
        const double next = std::sqrt(std::sqrt(g)); // ||(M*M)^{-1} v|| -> sigma_min^{-2}
        if (!std::isfinite(next) || 1.0 / next < 1e-300)
            throw singular_matrix("resolvent_norm_numeric: sigma_min below 1e-300");
        change = std::fabs(next - est) / next;
        est = next;
        if (change < rel_tol)
            return est;
    }
    const double smin = detail::singular_values(shifted, nn).back();
    if (!(smin >= 1e-300))
        throw singular_matrix("resolvent_norm_numeric: sigma_min below 1e-300");
    return 1.0 / smin;
}

/// Binary cache of a dense operator: one JSON header line {n, eta_min, eta_max}
/// followed by n*n row-major (re, im) pairs as little-endian IEEE doubles.
inline void write_dense(const dense_operator& A, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw io_error("write_dense: cannot open " + path);
    nlohmann::json header = {{"n", A.dim()},
                             {"eta_min", A.grid().eta_min()},
                             {"eta_max", A.grid().eta_max()}};
    os << header.dump() << '\n';
    for (const auto& e : A.entries()) {
        for (double part : {e.real(), e.imag()}) {
            auto bits = std::bit_cast<std::uint64_t>(part);
            if constexpr (std::endian::native == std::endian::big)
                bits = __builtin_bswap64(bits);
            os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
    }
    if (!os)
        throw io_error("write_dense: write failed for " + path);
}

inline dense_operator read_dense(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw io_error("read_dense: cannot open " + path);
    std::string line;
    std::getline(is, line);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw io_error("read_dense: bad header: " + std::string(e.what()));
    }
    const log_grid grid(header.at("eta_min").get<double>(), header.at("eta_max").get<double>(),
                        header.at("n").get<std::size_t>());
    std::vector<cplx> e(grid.size() * grid.size());
    for (auto& v : e) {
        double parts[2];
        for (double& part : parts) {
            std::uint64_t bits;
            is.read(reinterpret_cast<char*>(&bits), sizeof bits);
            if constexpr (std::endian::native == std::endian::big)
                bits = __builtin_bswap64(bits);
            part = std::bit_cast<double>(bits);
        }
        v = cplx(parts[0], parts[1]);
    }
    if (!is)
        throw io_error("read_dense: truncated payload in " + path);
    return dense_operator(grid, std::move(e));
}

} // namespace tfmodel
