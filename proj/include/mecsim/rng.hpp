#ifndef MECSIM_RNG_HPP
#define MECSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace mecsim::rng {

using Engine = std::mt19937_64;

/// Named sub-streams of the root seed. Each (stream, index) pair gets its own
/// engine, so adding base stations or snapshots never perturbs other streams.
enum class Stream : std::uint64_t {
    PopularityShuffle = 1,
    Arrivals = 2,
    MdcAvailability = 3,
    MsPlacement = 4,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream,
                                           std::uint64_t index) {
    return splitmix64(splitmix64(root ^ (static_cast<std::uint64_t>(stream) << 32)) + index);
}

inline Engine make_engine(std::uint64_t root, Stream stream, std::uint64_t index) {
    return Engine(derive_seed(root, stream, index));
}

// The standard distributions are implementation-defined; everything below is
// hand-rolled inverse-transform sampling so traces are reproducible across
// standard libraries.

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double exponential(Engine& g, double mean) {
    return -mean * std::log1p(-uniform01(g));
}

/// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Engine& g, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = g();
    while (v >= limit) v = g();
    return v % n;
}

template <typename T>
void shuffle(std::vector<T>& v, Engine& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(g, i)]);
    }
}

/// Marsaglia polar method; one variate per call.
inline double normal(Engine& g, double mu, double sigma) {
    double u, v, s;
    do {
        u = 2.0 * uniform01(g) - 1.0;
        v = 2.0 * uniform01(g) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mu + sigma * u * std::sqrt(-2.0 * std::log(s) / s);
}

/// Index into a cumulative distribution (cdf.back() == 1): smallest i with u <= cdf[i].
inline std::size_t sample_cdf(std::span<const double> cdf, Engine& g) {
    const double u = uniform01(g);
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf[mid] >= u) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

inline std::vector<double> to_cdf(std::span<const double> pmf) {
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;  // absorb rounding in the last bin
    return cdf;
}

}  // namespace mecsim::rng

#endif
