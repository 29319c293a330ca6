#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "tfmodel/errors.hpp"
#include "tfmodel/halfline.hpp"
#include "tfmodel/operator.hpp"
#include "tfmodel/specialfn.hpp"
#include "tfmodel/unitary.hpp"

namespace tfmodel {

/// F(mu) = [[0, F+-], [F-+, 0]].
struct model_matrix_t {
    double mu = 0.0;
    cplx f_plus_minus;
    cplx f_minus_plus;
};

// F+- = e^{i pi/4} e^{-pi mu/2} Gamma(1/2 + i mu) / sqrt(2 pi)
// F-+ = e^{i pi/4} e^{+pi mu/2} Gamma(1/2 - i mu) / sqrt(2 pi)
// The exponentials are folded into log Gamma before exponentiating.
inline model_matrix_t model_matrix(double mu)
{
    require_mu(mu, "model_matrix");
    const cplx lg = log_gamma_critical(critical_line_point(mu), +1);
    const cplx base(-0.5 * log_2pi, 0.25 * pi);
    model_matrix_t f;
    f.mu = mu;
    f.f_plus_minus = std::exp(base - 0.5 * pi * mu + lg);
    f.f_minus_plus = std::exp(base + 0.5 * pi * mu + std::conj(lg));
    return f;
}

// ||F(mu)|| = (1 + e^{-2 pi mu})^{-1/2}.
inline double matrix_norm(double mu)
{
    require_mu(mu, "matrix_norm");
    return 1.0 / std::sqrt(1.0 + std::exp(-2.0 * pi * mu));
}

/// (M_F phi)(mu_j) = F(mu_j) phi(mu_j): plus <- F+- phi_-, minus <- F-+ phi_+.
inline model_element apply_model(const model_element& phi)
{
    const auto& g = phi.grid();
    std::vector<cplx> p(g.size()), m(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto f = model_matrix(g.mu(j));
        p[j] = f.f_plus_minus * phi.minus()[j];
        m[j] = f.f_minus_plus * phi.plus()[j];
    }
    return model_element(g, std::move(p), std::move(m));
}

inline double mult_operator_norm(const mu_grid& grid)
{
    double r = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        r = std::max(r, matrix_norm(grid.mu(j)));
    return r;
}

/// || U F x - M_F U x || / ||x|| with F applied by quadrature (0 for x = 0).
inline double model_identity_defect(const halfline_function& x, const mu_grid& mu,
                                    quadrature_rule rule = quadrature_rule::product_linear)
{
    const double nx = norm(x);
    if (nx == 0.0)
        return 0.0;
    const auto lhs = forward_u(apply_trunc_fourier(x, rule), mu);
    const auto rhs = apply_model(forward_u(x, mu));
    return model_norm(lhs - rhs) / nx;
}

/// Closed-form route for e_a: max over the mu nodes of
/// |U F e_a - F(mu) U e_a| / |U F e_a| over both channels.
inline double model_identity_defect_closed(double a, const mu_grid& mu)
{
    require_positive_amplitude(a, "model_identity_defect_closed");
    double worst = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const double m = mu.mu(j);
        const auto f = model_matrix(m);
        const cplx lp = u_trunc_fourier_exp_closed(a, m, +1);
        const cplx lm = u_trunc_fourier_exp_closed(a, m, -1);
        const cplx rp = f.f_plus_minus * u_exp_closed(a, m, -1);
        const cplx rm = f.f_minus_plus * u_exp_closed(a, m, +1);
        worst = std::max(worst, std::abs(lp - rp) / std::abs(lp));
        worst = std::max(worst, std::abs(lm - rm) / std::abs(lm));
    }
    return worst;
}

} // namespace tfmodel
