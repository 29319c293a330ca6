#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "tfmodel/specialfn.hpp"

namespace tfmodel {
namespace detail {

struct fftw_buffer_deleter {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using fftw_buffer = std::unique_ptr<fftw_complex[], fftw_buffer_deleter>;

inline fftw_buffer make_fftw_buffer(std::size_t n)
{
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!p)
        throw std::bad_alloc();
    return fftw_buffer(p);
}

// Process-wide plan cache. Planning is serialized (FFTW planners are not
// thread-safe); executing a stored plan on fresh aligned buffers is.
class fft_plan_cache {
public:
    static fft_plan_cache& instance()
    {
        static fft_plan_cache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int direction)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, direction);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        auto in = make_fftw_buffer(n);
        auto out = make_fftw_buffer(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), direction,
                                          FFTW_ESTIMATE);
        plans_.emplace(key, plan);
        return plan;
    }

    fft_plan_cache(const fft_plan_cache&) = delete;
    fft_plan_cache& operator=(const fft_plan_cache&) = delete;

private:
    fft_plan_cache() = default;
    ~fft_plan_cache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

// exp(i * theta * l^2 / 2) with the phase reduced in extended precision.
inline cplx chirp(double theta, std::size_t l)
{
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    const long double l2 = static_cast<long double>(l) * static_cast<long double>(l);
    long double phase = std::fmod(0.5L * static_cast<long double>(theta) * l2, two_pi);
    return std::polar(1.0, static_cast<double>(phase));
}

} // namespace detail

/// Chirp-z transform: X_j = sum_k x_k exp(i theta j k), j = 0..m-1.
///
/// Bluestein's identity jk = (j^2 + k^2 - (j-k)^2)/2 turns the sum into a
/// linear convolution evaluated with FFTs of a power-of-two length >= n+m-1.
inline std::vector<cplx> chirp_z(std::span<const cplx> x, double theta, std::size_t m)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(m);
    if (n == 0 || m == 0)
        return out;

    const std::size_t len = detail::next_pow2(n + m - 1);
    auto a = detail::make_fftw_buffer(len);
    auto b = detail::make_fftw_buffer(len);
    auto fa = detail::make_fftw_buffer(len);
    auto fb = detail::make_fftw_buffer(len);
    auto* ac = reinterpret_cast<cplx*>(a.get());
    auto* bc = reinterpret_cast<cplx*>(b.get());
    auto* fac = reinterpret_cast<cplx*>(fa.get());
    auto* fbc = reinterpret_cast<cplx*>(fb.get());

    for (std::size_t k = 0; k < len; ++k) {
        ac[k] = 0.0;
        bc[k] = 0.0;
    }
    for (std::size_t k = 0; k < n; ++k)
        ac[k] = x[k] * detail::chirp(theta, k);
    // b_l = exp(-i theta l^2 / 2) for l in (-(n-1), m-1), wrapped circularly.
    for (std::size_t l = 0; l < m; ++l)
        bc[l] = std::conj(detail::chirp(theta, l));
    for (std::size_t l = 1; l < n; ++l)
        bc[len - l] = std::conj(detail::chirp(theta, l));

    auto& cache = detail::fft_plan_cache::instance();
    fftw_plan fwd = cache.get(len, FFTW_FORWARD);
    fftw_plan bwd = cache.get(len, FFTW_BACKWARD);
    fftw_execute_dft(fwd, a.get(), fa.get());
    fftw_execute_dft(fwd, b.get(), fb.get());
    for (std::size_t k = 0; k < len; ++k)
        fac[k] *= fbc[k];
    fftw_execute_dft(bwd, fa.get(), a.get());

    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t j = 0; j < m; ++j)
        out[j] = ac[j] * scale * detail::chirp(theta, j);
    return out;
}

/// Direct O(n m) evaluation of the same sum; reference for chirp_z.
inline std::vector<cplx> chirp_z_direct(std::span<const cplx> x, double theta, std::size_t m)
{
    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const long double phase =
                static_cast<long double>(theta) * static_cast<long double>(j * k);
            acc += x[k] * std::polar(1.0, static_cast<double>(std::fmod(
                                              phase, 2.0L * std::numbers::pi_v<long double>)));
        }
        out[j] = acc;
    }
    return out;
}

} // namespace tfmodel
