#include "copulacpd/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace copulacpd {

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double CounterRng::normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::laplace(double scale) noexcept {
    const double u = uniform() - 0.5;
    const double sign = u < 0 ? -1.0 : 1.0;
    return -scale * sign * std::log1p(-2.0 * std::fabs(u));
}

double CounterRng::student_t(unsigned dof) noexcept {
    const double numerator = normal();
    double chi2 = 0.0;
    for (unsigned i = 0; i < dof; ++i) {
        const double g = normal();
        chi2 += g * g;
    }
    return numerator / std::sqrt(chi2 / dof);
}

std::uint64_t CounterRng::poisson(double lambda) noexcept {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = uniform();
    while (p > limit) {
        ++k;
        p *= uniform();
    }
    return k;
}

std::vector<std::size_t> random_permutation(std::size_t n, CounterRng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace copulacpd
