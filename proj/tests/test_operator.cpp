#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "tfmodel/operator.hpp"
#include "tfmodel/spectral.hpp"

using namespace tfmodel;

namespace {

halfline_function random_function(const log_grid& g, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    std::vector<cplx> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        v[k] = cplx(d(rng), d(rng)) * std::exp(-0.1 * g.eta(k) * g.eta(k));
    return halfline_function(g, std::move(v));
}

std::vector<double> log_spaced(double lo, double hi, int count)
{
    std::vector<double> t;
    for (int i = 0; i < count; ++i)
        t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return t;
}

double max_rel_error_vs_closed(double a, const log_grid& g, const std::vector<double>& ts)
{
    const auto v = trunc_fourier_at(exp_fn(a, g), ts, quadrature_rule::product_linear);
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const cplx c = trunc_fourier_exp_closed(a, ts[i]);
        worst = std::max(worst, std::abs(v[i] - c) / std::abs(c));
    }
    return worst;
}

} // namespace

TEST(TruncFourier, ZeroInput)
{
    const log_grid g(-5.0, 2.0, 64);
    for (auto rule : {quadrature_rule::trapezoid, quadrature_rule::product_linear}) {
        EXPECT_EQ(norm(apply_trunc_fourier(halfline_function::zero(g), rule)), 0.0);
        EXPECT_EQ(norm(apply_adjoint(halfline_function::zero(g), rule)), 0.0);
    }
}

TEST(TruncFourier, ExponentialClosedFormUpToHundred)
{
    // Fine window for oscillatory panels: xi in [e^-22, e^4.5].
    const auto ts = log_spaced(std::exp(-22.0), 100.0, 61);
    const log_grid coarse(-22.0, 4.5, 8192), fine(-22.0, 4.5, 16384);
    for (double a : {0.5, 1.0, 2.0}) {
        const double ec = max_rel_error_vs_closed(a, coarse, ts);
        const double ef = max_rel_error_vs_closed(a, fine, ts);
        EXPECT_LE(ef, 1e-5) << a;
        EXPECT_LT(ef, ec) << a;
    }
    EXPECT_LE(max_rel_error_vs_closed(1.0, fine, ts), 1e-6);
}

TEST(TruncFourier, TrapezoidAtZeroFrequency)
{
    const log_grid g(-40.0, 24.0, 4096);
    for (double a : {0.5, 1.0, 2.0}) {
        const std::vector<double> t0 = {0.0};
        const cplx v = trunc_fourier_at(exp_fn(a, g), t0)[0];
        EXPECT_NEAR(v.real(), 1.0 / (a * sqrt_2pi), 1e-9);
        EXPECT_NEAR(v.imag(), 0.0, 1e-15);
    }
}

TEST(TruncFourier, RulesAgreeWhereTrapezoidResolves)
{
    const log_grid g(-30.0, 3.0, 4096);
    const auto x = exp_fn(1.0, g);
    const auto ts = log_spaced(1e-3, 3.0, 20);
    const auto a = trunc_fourier_at(x, ts, quadrature_rule::trapezoid);
    const auto b = trunc_fourier_at(x, ts, quadrature_rule::product_linear);
    for (std::size_t i = 0; i < ts.size(); ++i)
        EXPECT_LE(std::abs(a[i] - b[i]), 3e-5 * std::abs(a[i])) << ts[i];
}

TEST(TruncFourier, AdjointIdentity)
{
    std::mt19937_64 rng(17);
    const log_grid g(-6.0, 1.5, 400);
    for (int i = 0; i < 10; ++i) {
        const auto x = random_function(g, rng), y = random_function(g, rng);
        const cplx lhs = inner_product(apply_trunc_fourier(x), y);
        const cplx rhs = inner_product(x, apply_adjoint(y));
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * norm(x) * norm(y));
    }
}

TEST(TruncFourier, AdjointOfRealInputIsConjugate)
{
    const log_grid g(-10.0, 2.0, 300);
    const auto e1 = exp_fn(1.0, g);
    const auto f = apply_trunc_fourier(e1), fa = apply_adjoint(e1);
    for (std::size_t k = 0; k < g.size(); ++k)
        EXPECT_LE(std::abs(fa[k] - std::conj(f[k])), 1e-15);
}

TEST(TruncFourier, StrictContraction)
{
    const log_grid g(-40.0, 24.0, 4096);
    for (double a : {0.5, 1.0, 2.0}) {
        const auto x = exp_fn(a, g);
        const double ratio = norm_sq(apply_trunc_fourier(x, quadrature_rule::product_linear)) / norm_sq(x);
        EXPECT_LT(ratio, 1.0);
        // ||F e_a||^2 = int_0^inf dt / (2 pi (a^2 + t^2)) = 1/(4a), half of ||e_a||^2
        EXPECT_NEAR(ratio, 0.5, 1e-4) << a;
    }
    const auto b = gaussian_eta_bump(0.0, 1.0, g);
    EXPECT_LT(norm(apply_trunc_fourier(b, quadrature_rule::product_linear)), norm(b));
}

TEST(ClosedForms, TruncFourierExp)
{
    EXPECT_NEAR(trunc_fourier_exp_closed(1.0, 0.0).real(), 0.3989422804014327, 1e-16);
    EXPECT_NEAR(trunc_fourier_exp_closed(2.0, 0.0).real(), 0.5 * 0.3989422804014327, 1e-16);
    EXPECT_NEAR(std::abs(trunc_fourier_exp_closed(1.0, 1e6)) * 1e6, 0.3989422804014327, 1e-9);
    EXPECT_THROW(trunc_fourier_exp_closed(0.0, 1.0), argument_error);
    EXPECT_THROW(trunc_fourier_exp_closed(-1.0, 1.0), argument_error);
}

TEST(ClosedForms, UExp)
{
    EXPECT_NEAR(u_exp_closed(1.0, 0.0, +1).real(), std::sqrt(pi), 1e-15);
    EXPECT_NEAR(u_exp_closed(4.0, 0.0, +1).real(), 0.5 * std::sqrt(pi), 1e-15);
    for (double mu : {0.3, 2.0, 7.5})
        for (double a : {0.5, 3.0})
            EXPECT_LE(std::abs(u_exp_closed(a, mu, -1) - std::conj(u_exp_closed(a, mu, +1))),
                      1e-15 * std::abs(u_exp_closed(a, mu, +1)));
    EXPECT_THROW(u_exp_closed(1.0, -1.0, +1), argument_error);
    EXPECT_THROW(u_exp_closed(1.0, 1.0, 0), argument_error);
    EXPECT_THROW(u_exp_closed(0.0, 1.0, 1), argument_error);
}

TEST(ClosedForms, UExpMatchesForwardU)
{
    const log_grid g(-40.0, 24.0, 4096);
    const mu_grid m(10.0, 101);
    const auto phi = forward_u(exp_fn(2.0, g), m);
    for (std::size_t j = 0; j < m.size(); ++j) {
        EXPECT_LE(std::abs(phi.plus()[j] - u_exp_closed(2.0, m.mu(j), +1) / sqrt_2pi), 1e-8);
        EXPECT_LE(std::abs(phi.minus()[j] - u_exp_closed(2.0, m.mu(j), -1) / sqrt_2pi), 1e-8);
    }
}

TEST(ClosedForms, UTruncFourierExp)
{
    const cplx v = u_trunc_fourier_exp_closed(1.0, 0.0, +1);
    EXPECT_NEAR(std::abs(v), 1.2533141373155001, 1e-15);
    EXPECT_NEAR(std::arg(v), pi / 4.0, 1e-15);
    for (double mu : {5.0, 20.0, 100.0}) {
        const double expected = 2.0 * std::sqrt(pi / 2.0) * std::exp(-1.5 * pi * mu);
        EXPECT_LE(std::fabs(std::abs(u_trunc_fourier_exp_closed(1.0, mu, +1)) / expected - 1.0),
                  1e-10)
            << mu;
    }
    EXPECT_TRUE(std::isfinite(std::abs(u_trunc_fourier_exp_closed(1.0, 200.0, -1))));
    EXPECT_THROW(u_trunc_fourier_exp_closed(-2.0, 1.0, 1), argument_error);
}

TEST(Dense, SmallGridEntries)
{
    const log_grid g(-1.0, 0.5, 2);
    const auto A = build_dense(g);
    ASSERT_EQ(A.dim(), 2u);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) {
            const cplx e = std::polar(std::sqrt(g.weight(j) * g.weight(k)) / sqrt_2pi,
                                      g.xi(j) * g.xi(k));
            EXPECT_LE(std::abs(A(j, k) - e), 1e-16);
        }
    EXPECT_THROW(build_dense(log_grid(-1.0, 1.0, 10), 5), argument_error);
}

TEST(Dense, AgreesWithDirectSum)
{
    const log_grid g(-8.0, 1.5, 500);
    const auto A = build_dense(g);
    const auto x = exp_fn(1.0, g);
    const auto lhs = A.apply(weight_normalized(x));
    const auto rhs = weight_normalized(apply_trunc_fourier(x));
    for (std::size_t k = 0; k < g.size(); ++k)
        EXPECT_LE(std::abs(lhs[k] - rhs[k]), 1e-12);
}

TEST(Dense, NormEstimateApproachesOneFromBelow)
{
    const auto A = build_dense(log_grid(-12.0, 2.0, 1024));
    const double s = operator_norm_estimate(A);
    EXPECT_GE(s, 0.95);
    EXPECT_LE(s, 1.0001);
}

TEST(Dense, SpectralRadiusHomogeneous)
{
    const auto A = build_dense(log_grid(-10.0, 1.0, 200));
    const double r = spectral_radius_estimate(A);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
    EXPECT_NEAR(spectral_radius_estimate(A.scaled(2.0)), 2.0 * r, 1e-12 * r);
}

TEST(Dense, ResolventNeumannRegime)
{
    const auto A = build_dense(log_grid(-12.0, 2.0, 512));
    const double r = resolvent_norm_numeric(A, {10.0, 0.0});
    EXPECT_GE(r, 1.0 / 10.01);
    EXPECT_LE(r, 1.0 / 9.0);
    const double r2 = resolvent_norm_numeric(A, {0.0, -10.0});
    EXPECT_GE(r2, 1.0 / 11.0);
    EXPECT_LE(r2, 1.0 / 9.0);
}

TEST(Dense, ResolventAwayFromSegmentWithinAnalyticBounds)
{
    const auto A = build_dense(log_grid(-20.0, 2.0, 1024));
    const cplx z = std::polar(1.0, -pi / 4.0);
    const double r = resolvent_norm_numeric(A, z);
    const auto b = resolvent_bounds_operator(z, mu_grid(20.0, 4096));
    EXPECT_GE(r, b.lower);
    EXPECT_LE(r, b.upper);
}

TEST(Dense, ResolventAtZeroIsLargeButFinite)
{
    const auto A = build_dense(log_grid(-6.0, 1.0, 128));
    const double r = resolvent_norm_numeric(A, 0.0);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GT(r, 1e3);
}

TEST(Dense, BinaryDumpRoundtrip)
{
    const auto A = build_dense(log_grid(-3.0, 1.0, 17));
    const auto path = (std::filesystem::temp_directory_path() / "tfmodel_dense_test.bin").string();
    write_dense(A, path);
    const auto B = read_dense(path);
    EXPECT_EQ(B.grid(), A.grid());
    EXPECT_EQ(B.entries(), A.entries());
    std::filesystem::remove(path);
    EXPECT_THROW(read_dense(path), io_error);
}
