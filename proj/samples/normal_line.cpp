// Resolvent growth approaching the spectrum along the normal through zeta.
#include <cstdio>

#include "tfmodel/spectral.hpp"

int main()
{
    using namespace tfmodel;
    const mu_grid mu(20.0, 4096);
    const cplx zeta = 0.3 * segment_direction;
    std::printf("%8s %12s %12s %12s %12s\n", "delta", "lower", "numeric", "upper", "delta*R");
    for (double d : {0.15, 0.06, 0.03, 0.015, 0.005}) {
        const auto b = resolvent_bounds_on_normal(zeta, d, +1, mu);
        std::printf("%8.4f %12.6g %12.6g %12.6g %12.6g\n", d, b.lower, *b.numeric, b.upper,
                    d * *b.numeric);
    }
    std::printf("A(zeta)/|zeta| = %.6g\n", bound_a(zeta) / std::abs(zeta));
}
