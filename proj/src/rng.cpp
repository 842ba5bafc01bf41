#include "trotherm/rng.hpp"

#include <cmath>
#include <numbers>

namespace trotherm {

std::uint64_t CounterRng::below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection of the biased low range.
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
}

double CounterRng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace trotherm
