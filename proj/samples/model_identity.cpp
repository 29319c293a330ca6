// U F x against F(mu) U x for a Gaussian bump, channel by channel.
#include <cstdio>

#include "tfmodel/model.hpp"

int main()
{
    using namespace tfmodel;
    const log_grid g(-40.0, 24.0, 4096);
    const mu_grid mu(20.0, 4096);
    const auto x = gaussian_eta_bump(0.0, 1.0, g);

    const auto lhs = forward_u(apply_trunc_fourier(x, quadrature_rule::product_linear), mu);
    const auto rhs = apply_model(forward_u(x, mu));
    for (std::size_t j = 0; j < mu.size(); j += 512)
        std::printf("mu=%6.3f  |lhs+ - rhs+|=%.3e  |lhs- - rhs-|=%.3e\n", mu.mu(j),
                    std::abs(lhs.plus()[j] - rhs.plus()[j]), std::abs(lhs.minus()[j] - rhs.minus()[j]));
    std::printf("relative defect %.3e\n", model_identity_defect(x, mu));
}
