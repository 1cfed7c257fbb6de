#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

// Batch multiplicative-order kernels.
//
// Each kernel computes, for every odd q in a batch, the order of 2 mod q by
// stepping Delta_q(r) = 2r mod q from r = 1. Orbits of different q are
// independent, so the vector variants run one q per lane. The scalar
// variants are the reference implementation; SIMD variants must agree with
// them bit for bit and are selected at runtime.
//
// Lane contract: q odd, 3 <= q < 2^63. The dispatcher enforces the first two
// and falls back to scalar for batches containing q >= 2^63.

namespace mdbl::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend b) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

/// Whether this build carries the variant and the running CPU supports it.
bool available(Backend b) noexcept;

/// Widest available backend, unless MDBL_SIMD names another available one.
Backend active_backend() noexcept;

/// Written to out[i] when the order of qs[i] exceeds the cap.
inline constexpr uint64_t kExceeded = 0;

/// out[i] = order of 2 mod qs[i] when it is <= cap, kExceeded otherwise.
void capped_orders(std::span<const uint64_t> qs, uint64_t cap, std::span<uint64_t> out,
                   Backend b = active_backend());

/// out[i] = order of 2 mod qs[i].
void full_orders(std::span<const uint64_t> qs, std::span<uint64_t> out,
                 Backend b = active_backend());

// Per-ISA entry points. Callers normally go through the dispatcher above.
namespace scalar {
void capped_orders(const uint64_t* qs, std::size_t n, uint64_t cap, uint64_t* out) noexcept;
void full_orders(const uint64_t* qs, std::size_t n, uint64_t* out) noexcept;
}  // namespace scalar

#if defined(MDBL_HAVE_AVX2_KERNELS)
namespace avx2 {
void capped_orders(const uint64_t* qs, std::size_t n, uint64_t cap, uint64_t* out) noexcept;
void full_orders(const uint64_t* qs, std::size_t n, uint64_t* out) noexcept;
}  // namespace avx2
#endif

#if defined(MDBL_HAVE_NEON_KERNELS)
namespace neon {
void capped_orders(const uint64_t* qs, std::size_t n, uint64_t cap, uint64_t* out) noexcept;
void full_orders(const uint64_t* qs, std::size_t n, uint64_t* out) noexcept;
}  // namespace neon
#endif

}  // namespace mdbl::kernels
