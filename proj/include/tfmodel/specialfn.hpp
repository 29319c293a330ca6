#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "tfmodel/errors.hpp"

namespace tfmodel {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt_2pi = 2.506628274631000502415765284811045253;
inline constexpr double log_2pi = 1.837877066409345483560659472811235280;

// The parameter mu of the critical line Re s = 1/2.
class critical_line_point {
public:
    explicit critical_line_point(double mu) : mu_(mu)
    {
        if (!std::isfinite(mu) || mu < 0.0)
            throw argument_error("critical_line_point: mu must be finite and >= 0");
    }

    double mu() const noexcept { return mu_; }

private:
    double mu_;
};

// log(cosh x) without overflow for large |x|.
inline double log_cosh(double x)
{
    const double a = std::fabs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

namespace detail {

// Lanczos approximation with g = 607/128 and 15 terms (P. Godfrey's
// coefficient set, also used by several numerical libraries for complex
// arguments). Relative error of Gamma is ~1e-15 on Re z >= 1/2.
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr std::array<double, 15> lanczos_coef = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5,
};

// log Gamma for Re z >= 1/2; continuous there.
inline cplx log_gamma_right(cplx z)
{
    z -= 1.0;
    cplx series = lanczos_coef[0];
    for (std::size_t k = 1; k < lanczos_coef.size(); ++k)
        series += lanczos_coef[k] / (z + static_cast<double>(k));
    const cplx t = z + lanczos_g + 0.5;
    return 0.5 * log_2pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

} // namespace detail

inline bool is_gamma_pole(cplx z)
{
    constexpr double tol = 1e-14;
    if (std::fabs(z.imag()) > tol || z.real() > tol)
        return false;
    return std::fabs(z.real() - std::round(z.real())) <= tol;
}

// Returns w with exp(w) = Gamma(z). On Re z >= 1/2 this is the principal
// (continuous) branch; to the left the argument is shifted with the
// recurrence Gamma(z) = Gamma(z + k) / (z (z+1) ... (z+k-1)), so only
// exp(w) is meaningful there.
inline cplx log_gamma(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw argument_error("log_gamma: non-finite argument");
    if (is_gamma_pole(z))
        throw pole_error("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5)
        return detail::log_gamma_right(z);

    const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
    cplx correction = 0.0;
    for (int j = 0; j < shift; ++j)
        correction += std::log(z + static_cast<double>(j));
    return detail::log_gamma_right(z + static_cast<double>(shift)) - correction;
}

// log Gamma(1/2 + sign*i*mu), with the minus sign returning the exact conjugate.
inline cplx log_gamma_critical(const critical_line_point& p, int sign)
{
    if (sign != 1 && sign != -1)
        throw argument_error("gamma_critical: sign must be +1 or -1");
    const cplx w = detail::log_gamma_right(cplx(0.5, p.mu()));
    return sign > 0 ? w : std::conj(w);
}

// Gamma(1/2 + sign*i*mu).
inline cplx gamma_critical(const critical_line_point& p, int sign)
{
    return std::exp(log_gamma_critical(p, sign));
}

// |Gamma(1/2 + i mu)|^2 = 2 pi / (e^{pi mu} + e^{-pi mu}) from the closed form.
inline double abs_gamma_sq(const critical_line_point& p)
{
    const double e = std::exp(-pi * p.mu());
    return 2.0 * pi * e / (1.0 + e * e);
}

// log of |Gamma(1/2 + i mu)|^2, finite for all mu.
inline double log_abs_gamma_sq(const critical_line_point& p)
{
    return std::log(pi) - log_cosh(pi * p.mu());
}

} // namespace tfmodel
