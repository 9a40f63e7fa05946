#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaptmap {

/// Invalid input or a request outside an operation's domain.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed to meet its contract (tolerance, step budget,
/// missing bracket, ...). The message carries the diagnostic state.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require_finite(double x, const char* name) {
    if (!std::isfinite(x))
        throw domain_error(std::string("non-finite value for ") + name);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    if (n == 1) { g[0] = lo; return g; }
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo + i * h;
    g.back() = hi;
    return g;
}

/// FNV-1a 64-bit, used for config provenance digests.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace adaptmap
