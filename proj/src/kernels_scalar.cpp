#include "mdbl/kernels.hpp"

namespace mdbl::kernels::scalar {

namespace {

inline uint64_t double_mod(uint64_t r, uint64_t q, uint64_t qh) noexcept {
    return r <= qh ? r + r : r - (q - r);
}

}  // namespace

void capped_orders(const uint64_t* qs, std::size_t n, uint64_t cap, uint64_t* out) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const uint64_t q = qs[i], qh = q >> 1;
        uint64_t r = 1;
        out[i] = kExceeded;
        for (uint64_t k = 1; k <= cap; ++k) {
            r = double_mod(r, q, qh);
            if (r == 1) {
                out[i] = k;
                break;
            }
        }
    }
}

void full_orders(const uint64_t* qs, std::size_t n, uint64_t* out) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const uint64_t q = qs[i], qh = q >> 1;
        uint64_t r = 1, k = 0;
        do {
            r = double_mod(r, q, qh);
            ++k;
        } while (r != 1);
        out[i] = k;
    }
}

}  // namespace mdbl::kernels::scalar
