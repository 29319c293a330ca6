#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "tfmodel/chirpz.hpp"
#include "tfmodel/errors.hpp"
#include "tfmodel/halfline.hpp"

namespace tfmodel {

/// Element (phi_plus, phi_minus) of the two-channel model space, sampled on a
/// mu grid.
class model_element {
public:
    model_element(mu_grid grid, std::vector<cplx> plus, std::vector<cplx> minus)
        : grid_(std::move(grid)), plus_(std::move(plus)), minus_(std::move(minus))
    {
        if (plus_.size() != grid_.size() || minus_.size() != grid_.size())
            throw argument_error("model_element: channel length differs from mu grid size");
        for (const auto* ch : {&plus_, &minus_})
            for (const auto& v : *ch)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw argument_error("model_element: non-finite sample");
    }

    static model_element zero(const mu_grid& grid)
    {
        return model_element(grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()));
    }

    const mu_grid& grid() const noexcept { return grid_; }
    std::span<const cplx> plus() const noexcept { return plus_; }
    std::span<const cplx> minus() const noexcept { return minus_; }
    std::size_t size() const noexcept { return plus_.size(); }

private:
    mu_grid grid_;
    std::vector<cplx> plus_;
    std::vector<cplx> minus_;
};

inline void require_same_grid(const mu_grid& a, const mu_grid& b, const char* where)
{
    if (!(a == b))
        throw grid_mismatch(std::string(where) + ": model elements live on different mu grids");
}

// ||phi_+||^2 + ||phi_-||^2, trapezoid in mu.
inline double model_norm_sq(const model_element& phi)
{
    const auto& g = phi.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        acc += (std::norm(phi.plus()[j]) + std::norm(phi.minus()[j])) * g.weight(j);
    return acc;
}

inline double model_norm(const model_element& phi) { return std::sqrt(model_norm_sq(phi)); }

inline model_element operator-(const model_element& a, const model_element& b)
{
    require_same_grid(a.grid(), b.grid(), "operator-");
    std::vector<cplx> p(a.size()), m(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        p[j] = a.plus()[j] - b.plus()[j];
        m[j] = a.minus()[j] - b.minus()[j];
    }
    return model_element(a.grid(), std::move(p), std::move(m));
}

namespace detail {

// c_k h e^{eta_k/2} x_k / sqrt(2 pi): trapezoid-weighted samples of v(eta).
inline std::vector<cplx> weighted_v(const halfline_function& x)
{
    const auto& g = x.grid();
    std::vector<cplx> v(g.size());
    const double scale = g.spacing() / sqrt_2pi;
    for (std::size_t k = 0; k < g.size(); ++k)
        v[k] = x[k] * (g.end_factor(k) * scale * std::exp(0.5 * g.eta(k)));
    return v;
}

} // namespace detail

/// The map U: (Ux)_{+-}(mu) = (2 pi)^{-1/2} int v(eta) e^{+-i mu eta} d eta with
/// v(eta) = e^{eta/2} x(e^eta), i.e. the Mellin transform on Re s = 1/2 split
/// into mu > 0 and mu < 0. Evaluated exactly at the mu nodes by chirp-z.
inline model_element forward_u(const halfline_function& x, const mu_grid& mu)
{
    const auto& g = x.grid();
    const auto v = detail::weighted_v(x);
    const double theta = mu.spacing() * g.spacing();
    auto plus = chirp_z(v, theta, mu.size());
    auto minus = chirp_z(v, -theta, mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const double phase = mu.mu(j) * g.eta_min();
        plus[j] *= std::polar(1.0, phase);
        minus[j] *= std::polar(1.0, -phase);
    }
    return model_element(mu, std::move(plus), std::move(minus));
}

/// Same quadrature as forward_u, summed directly in O(n m).
inline model_element forward_u_direct(const halfline_function& x, const mu_grid& mu)
{
    const auto& g = x.grid();
    const auto v = detail::weighted_v(x);
    std::vector<cplx> plus(mu.size()), minus(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        cplx ap = 0.0, am = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const cplx e = std::polar(1.0, mu.mu(j) * g.eta(k));
            ap += v[k] * e;
            am += v[k] * std::conj(e);
        }
        plus[j] = ap;
        minus[j] = am;
    }
    return model_element(mu, std::move(plus), std::move(minus));
}

/// Inverse of U. The two channels are glued into u(nu) on [-mu_max, mu_max]
/// (plus channel for nu > 0, minus channel at -nu for nu < 0), the full-line
/// transform v(eta) = (2 pi)^{-1/2} int u(nu) e^{-i nu eta} d nu is evaluated
/// on the target grid, and x(xi) = xi^{-1/2} v(ln xi).
inline halfline_function inverse_u(const model_element& phi, const log_grid& target)
{
    const auto& mg = phi.grid();
    const std::size_t m = mg.size();
    if (m < 2)
        return halfline_function::zero(target);

    const double dnu = mg.spacing();
    const double nu0 = -mg.mu_max();
    const double eta0 = target.eta_min();
    const std::size_t len = 2 * m - 1;
    std::vector<cplx> u(len);
    for (std::size_t l = 0; l < len; ++l) {
        cplx val;
        if (l + 1 < m)
            val = phi.minus()[m - 1 - l];
        else if (l + 1 == m)
            val = 0.5 * (phi.plus()[0] + phi.minus()[0]);
        else
            val = phi.plus()[l - (m - 1)];
        const double w = (l == 0 || l + 1 == len) ? 0.5 * dnu : dnu;
        const double nu = l + 1 == m ? 0.0 : nu0 + static_cast<double>(l) * dnu;
        u[l] = val * (w / sqrt_2pi) * std::polar(1.0, -(nu - nu0) * eta0);
    }
    auto v = chirp_z(u, -dnu * target.spacing(), target.size());
    std::vector<cplx> x(target.size());
    for (std::size_t k = 0; k < target.size(); ++k) {
        const double eta = target.eta(k);
        x[k] = v[k] * std::polar(std::exp(-0.5 * eta), -nu0 * eta);
    }
    return halfline_function(target, std::move(x));
}

/// Relative Parseval defect | ||Ux||^2 - ||x||^2 | / ||x||^2 (0 for x = 0).
inline double parseval_defect(const halfline_function& x, const mu_grid& mu)
{
    const double nx = norm_sq(x);
    if (nx == 0.0)
        return 0.0;
    return std::fabs(model_norm_sq(forward_u(x, mu)) - nx) / nx;
}

} // namespace tfmodel
