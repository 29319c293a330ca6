#include <random>

#include <gtest/gtest.h>

#include "tfmodel/chirpz.hpp"

using namespace tfmodel;

TEST(ChirpZ, MatchesDirectSum)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    for (auto [n, m, theta] : {std::tuple{1, 1, 0.3}, {7, 3, 1.1}, {100, 257, -0.0123},
                               {513, 64, 2.9}, {1000, 1000, 1e-4}}) {
        std::vector<cplx> x(static_cast<std::size_t>(n));
        for (auto& v : x)
            v = {d(rng), d(rng)};
        const auto fast = chirp_z(x, theta, static_cast<std::size_t>(m));
        const auto slow = chirp_z_direct(x, theta, static_cast<std::size_t>(m));
        double scale = 0.0;
        for (const auto& v : x)
            scale += std::abs(v);
        for (std::size_t j = 0; j < slow.size(); ++j)
            EXPECT_LE(std::abs(fast[j] - slow[j]), 1e-12 * scale) << n << " " << m << " " << j;
    }
}

TEST(ChirpZ, ReducesToDftAtRootOfUnity)
{
    const std::size_t n = 16;
    std::vector<cplx> x(n);
    x[1] = 1.0;
    const auto out = chirp_z(x, 2.0 * pi / n, n);
    for (std::size_t j = 0; j < n; ++j)
        EXPECT_LE(std::abs(out[j] - std::polar(1.0, 2.0 * pi * j / n)), 1e-14);
}

TEST(ChirpZ, EmptyInputs)
{
    EXPECT_TRUE(chirp_z({}, 0.1, 0).empty());
    const auto z = chirp_z({}, 0.1, 4);
    ASSERT_EQ(z.size(), 4u);
    for (const auto& v : z)
        EXPECT_EQ(v, cplx(0.0));
}
