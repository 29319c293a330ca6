#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfmodel/errors.hpp"
#include "tfmodel/specialfn.hpp"

namespace tfmodel {

/// Uniform grid in eta = ln(xi) covering [eta_min, eta_max] with n nodes.
///
/// Node k sits at xi_k = exp(eta_k) > 0. Quadrature on R+ uses the trapezoid
/// rule in eta: w_k = xi_k * h, halved at both endpoints.
class log_grid {
public:
    log_grid(double eta_min, double eta_max, std::size_t n)
        : eta_min_(eta_min), eta_max_(eta_max), n_(n)
    {
        if (!std::isfinite(eta_min) || !std::isfinite(eta_max) || !(eta_min < eta_max))
            throw argument_error("log_grid: require finite eta_min < eta_max");
        if (n < 2)
            throw argument_error("log_grid: require n >= 2");
        h_ = (eta_max - eta_min) / static_cast<double>(n - 1);
        if (!(h_ > 0.0) || !(std::exp(eta_min) > 0.0))
            throw argument_error("log_grid: degenerate spacing or xi underflow");
    }

    double eta_min() const noexcept { return eta_min_; }
    double eta_max() const noexcept { return eta_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }

    double eta(std::size_t k) const noexcept
    {
        return k + 1 == n_ ? eta_max_ : eta_min_ + static_cast<double>(k) * h_;
    }
    double xi(std::size_t k) const noexcept { return std::exp(eta(k)); }

    // Trapezoid factor in eta: 1/2 at the ends, 1 inside.
    double end_factor(std::size_t k) const noexcept
    {
        return (k == 0 || k + 1 == n_) ? 0.5 : 1.0;
    }
    double weight(std::size_t k) const noexcept { return end_factor(k) * xi(k) * h_; }

    std::vector<double> xis() const
    {
        std::vector<double> out(n_);
        for (std::size_t k = 0; k < n_; ++k)
            out[k] = xi(k);
        return out;
    }
    std::vector<double> weights() const
    {
        std::vector<double> out(n_);
        for (std::size_t k = 0; k < n_; ++k)
            out[k] = weight(k);
        return out;
    }

    friend bool operator==(const log_grid&, const log_grid&) = default;

private:
    double eta_min_;
    double eta_max_;
    std::size_t n_;
    double h_ = 0.0;
};

inline log_grid make_log_grid(double eta_min, double eta_max, std::size_t n)
{
    return log_grid(eta_min, eta_max, n);
}

/// Uniform grid mu_j on [0, mu_max]. A single node (m = 1) is the degenerate
/// grid {0} and requires mu_max = 0.
class mu_grid {
public:
    mu_grid(double mu_max, std::size_t m) : mu_max_(mu_max), m_(m)
    {
        if (m == 0)
            throw argument_error("mu_grid: require m >= 1");
        if (!std::isfinite(mu_max) || mu_max < 0.0)
            throw argument_error("mu_grid: mu_max must be finite and >= 0");
        if (m == 1 && mu_max != 0.0)
            throw argument_error("mu_grid: a single node requires mu_max = 0");
        if (m >= 2 && !(mu_max > 0.0))
            throw argument_error("mu_grid: require mu_max > 0 when m >= 2");
        step_ = m >= 2 ? mu_max / static_cast<double>(m - 1) : 0.0;
    }

    double mu_max() const noexcept { return mu_max_; }
    std::size_t size() const noexcept { return m_; }
    double spacing() const noexcept { return step_; }

    double mu(std::size_t j) const noexcept
    {
        return j + 1 == m_ ? mu_max_ : static_cast<double>(j) * step_;
    }

    // Trapezoid weight on [0, mu_max]; zero for the degenerate grid.
    double weight(std::size_t j) const noexcept
    {
        if (m_ < 2)
            return 0.0;
        return (j == 0 || j + 1 == m_) ? 0.5 * step_ : step_;
    }

    friend bool operator==(const mu_grid&, const mu_grid&) = default;

private:
    double mu_max_;
    std::size_t m_;
    double step_ = 0.0;
};

/// Complex samples x(xi_k) of a function in L2(R+).
class halfline_function {
public:
    halfline_function(log_grid grid, std::vector<cplx> values)
        : grid_(std::move(grid)), values_(std::move(values))
    {
        if (values_.size() != grid_.size())
            throw argument_error("halfline_function: sample count differs from grid size");
        for (const auto& v : values_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw argument_error("halfline_function: non-finite sample");
    }

    static halfline_function zero(const log_grid& grid)
    {
        return halfline_function(grid, std::vector<cplx>(grid.size()));
    }

    const log_grid& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    const cplx& operator[](std::size_t k) const noexcept { return values_[k]; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    log_grid grid_;
    std::vector<cplx> values_;
};

inline void require_same_grid(const log_grid& a, const log_grid& b, const char* where)
{
    if (!(a == b))
        throw grid_mismatch(std::string(where) + ": functions live on different grids");
}

/// Quadrature approximation of <x, y> = int x conj(y) dxi.
inline cplx inner_product(const halfline_function& x, const halfline_function& y)
{
    require_same_grid(x.grid(), y.grid(), "inner_product");
    const auto& g = x.grid();
    cplx acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        acc += x[k] * std::conj(y[k]) * g.weight(k);
    return acc;
}

inline double norm_sq(const halfline_function& x)
{
    const auto& g = x.grid();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        acc += std::norm(x[k]) * g.weight(k);
    return acc;
}

inline double norm(const halfline_function& x) { return std::sqrt(norm_sq(x)); }

// Quadrature of int |x(xi)| xi^{-1/2} dxi; finiteness characterises the
// domain on which U is given by absolutely convergent integrals.
inline double in_domain_d(const halfline_function& x)
{
    const auto& g = x.grid();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        acc += std::abs(x[k]) * g.weight(k) / std::sqrt(g.xi(k));
    return acc;
}

// e_a(t) = exp(-a t).
inline halfline_function exp_fn(double a, const log_grid& grid)
{
    if (!std::isfinite(a) || !(a > 0.0))
        throw argument_error("exp_fn: require a > 0");
    std::vector<cplx> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        v[k] = std::exp(-a * grid.xi(k));
    return halfline_function(grid, std::move(v));
}

// Gaussian bump in the log variable: x(xi) = xi^{-1/2} exp(-((ln xi - center)/width)^2),
// so that e^{eta/2} x(e^eta) is a plain Gaussian.
inline halfline_function gaussian_eta_bump(double center, double width, const log_grid& grid)
{
    if (!std::isfinite(center) || !std::isfinite(width) || !(width > 0.0))
        throw argument_error("gaussian_eta_bump: require finite center and width > 0");
    std::vector<cplx> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = (grid.eta(k) - center) / width;
        v[k] = std::exp(-s * s - 0.5 * grid.eta(k));
    }
    return halfline_function(grid, std::move(v));
}

inline halfline_function operator-(const halfline_function& a, const halfline_function& b)
{
    require_same_grid(a.grid(), b.grid(), "operator-");
    std::vector<cplx> v(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        v[k] = a[k] - b[k];
    return halfline_function(a.grid(), std::move(v));
}

inline halfline_function operator*(cplx s, const halfline_function& a)
{
    std::vector<cplx> v(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        v[k] = s * a[k];
    return halfline_function(a.grid(), std::move(v));
}

} // namespace tfmodel
