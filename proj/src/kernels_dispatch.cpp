#include <cstdlib>
#include <string>

#include "mdbl/error.hpp"
#include "mdbl/kernels.hpp"

namespace mdbl::kernels {

namespace {

constexpr uint64_t kLaneLimit = uint64_t{1} << 63;

// Returns true when every q fits the SIMD lane contract; throws on q that no
// kernel accepts.
bool check_batch(std::span<const uint64_t> qs, std::size_t out_size) {
    if (out_size < qs.size()) throw DomainError("kernels: output span shorter than input");
    bool lane_safe = true;
    for (const uint64_t q : qs) {
        if (q < 3 || q % 2 == 0)
            throw DomainError("kernels: modulus must be odd and >= 3, got " + std::to_string(q));
        lane_safe &= q < kLaneLimit;
    }
    return lane_safe;
}

Backend resolve(Backend requested, bool lane_safe) {
    if (!available(requested))
        throw DomainError("kernels: backend " + std::string(to_string(requested)) +
                          " is not available on this machine");
    return lane_safe ? requested : Backend::scalar;
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    if (name == "neon") return Backend::neon;
    return std::nullopt;
}

bool available(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2:
#if defined(MDBL_HAVE_AVX2_KERNELS)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
#if defined(MDBL_HAVE_NEON_KERNELS)
            return true;  // Advanced SIMD is mandatory on AArch64
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() noexcept {
    static const Backend chosen = [] {
        if (const char* env = std::getenv("MDBL_SIMD")) {
            const auto parsed = parse_backend(env);
            if (parsed && available(*parsed)) return *parsed;
        }
        if (available(Backend::avx2)) return Backend::avx2;
        if (available(Backend::neon)) return Backend::neon;
        return Backend::scalar;
    }();
    return chosen;
}

void capped_orders(std::span<const uint64_t> qs, uint64_t cap, std::span<uint64_t> out,
                   Backend b) {
    if (cap == 0) throw DomainError("kernels: cap must be >= 1");
    switch (resolve(b, check_batch(qs, out.size()))) {
        case Backend::scalar: return scalar::capped_orders(qs.data(), qs.size(), cap, out.data());
#if defined(MDBL_HAVE_AVX2_KERNELS)
        case Backend::avx2: return avx2::capped_orders(qs.data(), qs.size(), cap, out.data());
#endif
#if defined(MDBL_HAVE_NEON_KERNELS)
        case Backend::neon: return neon::capped_orders(qs.data(), qs.size(), cap, out.data());
#endif
        default: break;
    }
}

void full_orders(std::span<const uint64_t> qs, std::span<uint64_t> out, Backend b) {
    switch (resolve(b, check_batch(qs, out.size()))) {
        case Backend::scalar: return scalar::full_orders(qs.data(), qs.size(), out.data());
#if defined(MDBL_HAVE_AVX2_KERNELS)
        case Backend::avx2: return avx2::full_orders(qs.data(), qs.size(), out.data());
#endif
#if defined(MDBL_HAVE_NEON_KERNELS)
        case Backend::neon: return neon::full_orders(qs.data(), qs.size(), out.data());
#endif
        default: break;
    }
}

}  // namespace mdbl::kernels
