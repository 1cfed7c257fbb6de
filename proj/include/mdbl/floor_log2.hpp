#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "mdbl/types.hpp"

namespace mdbl {

namespace detail {

// Position of the dominant one of every byte value; entry 0 is never read.
inline constexpr std::array<uint8_t, 256> kDominantOne = [] {
    std::array<uint8_t, 256> table{};
    for (unsigned b = 2; b < 256; ++b) table[b] = static_cast<uint8_t>(table[b / 2] + 1);
    return table;
}();

}  // namespace detail

/// floor(log2(u)) for u != 0: three halvings isolate the most significant
/// nonzero byte, then the byte table finishes the job.
constexpr int floor_log2_table_unchecked(uint64_t u) noexcept {
    int base = 0;
    if (u >> 32) { u >>= 32; base = 32; }
    if (u >> 16) { u >>= 16; base += 16; }
    if (u >> 8)  { u >>= 8;  base += 8; }
    return base + detail::kDominantOne[u];
}

/// Same contract as floor_log2_table_unchecked, via count-leading-zeros.
constexpr int floor_log2_clz_unchecked(uint64_t u) noexcept {
    return 63 - std::countl_zero(u);
}

template <Log2Backend B>
constexpr int floor_log2_unchecked(uint64_t u) noexcept {
    if constexpr (B == Log2Backend::table) return floor_log2_table_unchecked(u);
    else return floor_log2_clz_unchecked(u);
}

/// The unique t with 2^t <= u < 2^(t+1). Throws DomainError for u = 0.
int floor_log2(uint64_t u, Log2Backend backend = Log2Backend::table);

}  // namespace mdbl
