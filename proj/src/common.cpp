#include "lmnet/common.hpp"

#include <charconv>
#include <cstdio>

namespace lmnet {

const char* subset_name(Subset s) {
    switch (s) {
        case Subset::Training: return "training";
        case Subset::Selection: return "selection";
        case Subset::Testing: return "testing";
        case Subset::Unused: return "unused";
    }
    return "unknown";
}

namespace rng {

std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace rng

std::string format_double(double v, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
    return buf;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw DataError("not a number: '" + s + "'");
    }
    return v;
}

}  // namespace lmnet
