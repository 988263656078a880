#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmnet {

// Bad input data: unreadable files, malformed rows, unusable subsets.
// The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure while fitting. The CLI maps this to exit code 3.
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A row was refused because a required cell is absent. Kept separate so batch
// scoring can report the refusal per row instead of aborting.
struct MissingValueError : DataError {
    using DataError::DataError;
};

enum class Subset : std::uint8_t { Training = 0, Selection = 1, Testing = 2, Unused = 3 };

const char* subset_name(Subset s);

namespace rng {

// std::uniform_*_distribution output is implementation-defined, which would
// break cross-platform reproducibility of seeded runs. These helpers are not.

inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased draw from [0, n), n >= 1, by rejection.
inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v = gen();
    while (v >= limit) v = gen();
    return v % n;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[below(gen, i)]);
    }
}

std::uint64_t mix(std::uint64_t x);

// Stable per-task seed for a (base, a, b) hierarchy, e.g. (run seed, order, trial).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return mix(mix(mix(base) ^ a) ^ b);
}

}  // namespace rng

// Shortest exact decimal form is overkill here; 17 significant digits
// round-trip any 64-bit float and keep file output deterministic.
std::string format_double(double v, int significant_digits = 17);
double parse_double(const std::string& s);  // throws DataError on junk

}  // namespace lmnet
