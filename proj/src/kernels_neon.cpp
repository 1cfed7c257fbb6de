// AArch64 variant of the batch order kernels; mirrors kernels_avx2.cpp.

#include <arm_neon.h>

#include <algorithm>
#include <bit>

#include "mdbl/floor_log2.hpp"
#include "mdbl/kernels.hpp"

namespace mdbl::kernels::neon {

namespace {

constexpr int kLanesPerVector = 2;
constexpr int kVectors = 2;
constexpr int kLanes = kLanesPerVector * kVectors;
constexpr unsigned kAllLanes = (1u << kLanes) - 1;

// Same sign-bit selection as the AVX2 kernel; requires q < 2^63.
inline uint64x2_t double_mod(uint64x2_t r, uint64x2_t q) noexcept {
    const uint64x2_t t = vsubq_u64(r, vsubq_u64(q, r));
    const uint64x2_t twice = vaddq_u64(r, r);
    const uint64x2_t below = vreinterpretq_u64_s64(vshrq_n_s64(vreinterpretq_s64_u64(t), 63));
    return vbslq_u64(below, twice, t);
}

inline unsigned lanes_at_one(const uint64x2_t r[kVectors], uint64x2_t one) noexcept {
    unsigned mask = 0;
    for (int v = 0; v < kVectors; ++v) {
        const uint64x2_t eq = vceqq_u64(r[v], one);
        mask |= static_cast<unsigned>((vgetq_lane_u64(eq, 0) & 1) |
                                      ((vgetq_lane_u64(eq, 1) & 1) << 1))
                << (v * kLanesPerVector);
    }
    return mask;
}

struct LaneState {
    uint64_t q[kLanes];
    uint64_t r[kLanes];

    void load(uint64x2_t qv[kVectors], uint64x2_t rv[kVectors]) const noexcept {
        for (int v = 0; v < kVectors; ++v) {
            qv[v] = vld1q_u64(q + v * kLanesPerVector);
            rv[v] = vld1q_u64(r + v * kLanesPerVector);
        }
    }
    void store_r(const uint64x2_t rv[kVectors]) noexcept {
        for (int v = 0; v < kVectors; ++v) vst1q_u64(r + v * kLanesPerVector, rv[v]);
    }
    void park(int lane) noexcept {
        q[lane] = 3;
        r[lane] = 2;
    }
};

}  // namespace

void capped_orders(const uint64_t* qs, std::size_t n, uint64_t cap, uint64_t* out) noexcept {
    const uint64x2_t one = vdupq_n_u64(1);
    for (std::size_t base = 0; base < n; base += kLanes) {
        const int live = static_cast<int>(std::min<std::size_t>(kLanes, n - base));
        LaneState st;
        int sigma[kLanes] = {};
        unsigned done = 0;
        uint64_t sigma_min = UINT64_MAX;
        for (int l = 0; l < kLanes; ++l) {
            if (l >= live) {
                st.park(l);
                done |= 1u << l;
                continue;
            }
            const uint64_t q = qs[base + l];
            sigma[l] = floor_log2_table_unchecked(q);
            st.q[l] = q;
            st.r[l] = uint64_t{1} << sigma[l];
            out[base + l] = kExceeded;
            if (static_cast<uint64_t>(sigma[l]) >= cap) done |= 1u << l;
            else sigma_min = std::min<uint64_t>(sigma_min, static_cast<uint64_t>(sigma[l]));
        }
        if (done == kAllLanes) continue;

        uint64x2_t qv[kVectors], rv[kVectors];
        st.load(qv, rv);
        const uint64_t k_max = cap - sigma_min;
        for (uint64_t k = 1; k <= k_max; ++k) {
            for (int v = 0; v < kVectors; ++v) rv[v] = double_mod(rv[v], qv[v]);
            unsigned hits = lanes_at_one(rv, one) & ~done;
            if (hits == 0) continue;
            done |= hits;
            while (hits) {
                const int l = std::countr_zero(hits);
                hits &= hits - 1;
                const uint64_t order = static_cast<uint64_t>(sigma[l]) + k;
                if (order <= cap) out[base + l] = order;
            }
            if (done == kAllLanes) break;
        }
    }
}

void full_orders(const uint64_t* qs, std::size_t n, uint64_t* out) noexcept {
    const uint64x2_t one = vdupq_n_u64(1);
    LaneState st;
    std::size_t index[kLanes] = {};
    uint64_t offset[kLanes] = {};
    unsigned active = 0;
    std::size_t next = 0;
    uint64_t k = 0;

    auto refill = [&](int l) {
        if (next < n) {
            const uint64_t q = qs[next];
            const int sigma = floor_log2_table_unchecked(q);
            st.q[l] = q;
            st.r[l] = uint64_t{1} << sigma;
            offset[l] = static_cast<uint64_t>(sigma) - k;
            index[l] = next++;
            active |= 1u << l;
        } else {
            st.park(l);
            active &= ~(1u << l);
        }
    };
    for (int l = 0; l < kLanes; ++l) refill(l);

    uint64x2_t qv[kVectors], rv[kVectors];
    st.load(qv, rv);
    while (active) {
        ++k;
        for (int v = 0; v < kVectors; ++v) rv[v] = double_mod(rv[v], qv[v]);
        unsigned hits = lanes_at_one(rv, one) & active;
        if (hits == 0) continue;
        st.store_r(rv);
        while (hits) {
            const int l = std::countr_zero(hits);
            hits &= hits - 1;
            out[index[l]] = offset[l] + k;
            refill(l);
        }
        st.load(qv, rv);
    }
}

}  // namespace mdbl::kernels::neon
