#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mipat/error.hpp"

namespace mipat {

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow("64-bit overflow in partition count");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow("64-bit overflow in partition count");
    return r;
}

/// Row n of the Stirling triangle, S(n, 0..n). Every intermediate value is
/// bounded by an entry of the requested row, so a throw means some S(n, k)
/// itself exceeds 2^64 - 1.
inline std::vector<std::uint64_t> stirling2_row(unsigned n) {
    std::vector<std::uint64_t> row{1};
    for (unsigned m = 1; m <= n; ++m) {
        std::vector<std::uint64_t> next(m + 1, 0);
        for (unsigned k = 1; k <= m; ++k) {
            std::uint64_t stay = k < m ? checked_mul(k, row[k]) : 0;
            next[k] = checked_add(stay, row[k - 1]);
        }
        row = std::move(next);
    }
    return row;
}

} // namespace detail

/// Number of partitions of an n-set into exactly k nonempty blocks.
/// Throws mipat::overflow when the exact value does not fit in 64 bits.
/// Every S(n, k) with n <= 26 fits.
inline std::uint64_t stirling2(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (n == 0) return 1;
    if (k == 0) return 0;
    if (n > 1000) throw overflow("stirling2: n = " + std::to_string(n) + " is outside the supported range");
    // Only S(m, j) with j >= k - (n - m) feed into S(n, k); restricting to
    // them keeps every intermediate <= S(n, k).
    std::vector<std::uint64_t> col(k + 1, 0);
    col[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        unsigned lo = (k + m > n) ? k + m - n : 1;
        for (unsigned j = std::min(m, k); j >= lo; --j) {
            std::uint64_t stay = j < m ? detail::checked_mul(j, col[j]) : 0;
            col[j] = detail::checked_add(stay, col[j - 1]);
        }
        for (unsigned j = 0; j < lo; ++j) col[j] = 0;
    }
    return col[k];
}

/// Bell number: total number of partitions of an n-set. Exact for n <= 25;
/// Bell(26) ~ 4.96e19 overflows and throws mipat::overflow.
inline std::uint64_t bell_number(unsigned n) {
    if (n > 25) throw overflow("bell_number: n = " + std::to_string(n) + " exceeds the 64-bit bound (n <= 25)");
    std::uint64_t total = 0;
    for (std::uint64_t s : detail::stirling2_row(n)) total = detail::checked_add(total, s);
    return total;
}

} // namespace mipat
