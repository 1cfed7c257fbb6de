// Compiled with -mavx2; only reached when the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "mdbl/floor_log2.hpp"
#include "mdbl/kernels.hpp"

namespace mdbl::kernels::avx2 {

namespace {

constexpr int kLanesPerVector = 4;
constexpr int kVectors = 2;  // two independent dependency chains
constexpr int kLanes = kLanesPerVector * kVectors;
constexpr unsigned kAllLanes = (1u << kLanes) - 1;

// One Delta_q step on four lanes. For q < 2^63, t = r - (q - r) has its sign
// bit set exactly when 2r < q, in which case the doubled value is r + r.
inline __m256i double_mod(__m256i r, __m256i q) noexcept {
    const __m256i t = _mm256_sub_epi64(r, _mm256_sub_epi64(q, r));
    const __m256i twice = _mm256_add_epi64(r, r);
    return _mm256_castpd_si256(_mm256_blendv_pd(_mm256_castsi256_pd(t),
                                                _mm256_castsi256_pd(twice),
                                                _mm256_castsi256_pd(t)));
}

inline unsigned lanes_at_one(const __m256i r[kVectors], __m256i one) noexcept {
    unsigned mask = 0;
    for (int v = 0; v < kVectors; ++v) {
        const __m256i eq = _mm256_cmpeq_epi64(r[v], one);
        mask |= static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(eq)))
                << (v * kLanesPerVector);
    }
    return mask;
}

struct alignas(32) LaneState {
    uint64_t q[kLanes];
    uint64_t r[kLanes];

    void load(__m256i qv[kVectors], __m256i rv[kVectors]) const noexcept {
        for (int v = 0; v < kVectors; ++v) {
            qv[v] = _mm256_load_si256(reinterpret_cast<const __m256i*>(q + v * kLanesPerVector));
            rv[v] = _mm256_load_si256(reinterpret_cast<const __m256i*>(r + v * kLanesPerVector));
        }
    }
    void store_r(const __m256i rv[kVectors]) noexcept {
        for (int v = 0; v < kVectors; ++v)
            _mm256_store_si256(reinterpret_cast<__m256i*>(r + v * kLanesPerVector), rv[v]);
    }
    // Idle lanes run q = 3 from r = 2; their hits are masked off by the caller.
    void park(int lane) noexcept {
        q[lane] = 3;
        r[lane] = 2;
    }
};

}  // namespace

void capped_orders(const uint64_t* qs, std::size_t n, uint64_t cap, uint64_t* out) noexcept {
    const __m256i one = _mm256_set1_epi64x(1);
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
            // 2^k mod q = 2^k for k <= sigma, so the orbit can start at 2^sigma.
            const uint64_t q = qs[base + l];
            sigma[l] = floor_log2_table_unchecked(q);
            st.q[l] = q;
            st.r[l] = uint64_t{1} << sigma[l];
            out[base + l] = kExceeded;
            if (static_cast<uint64_t>(sigma[l]) >= cap) done |= 1u << l;
            else sigma_min = std::min<uint64_t>(sigma_min, static_cast<uint64_t>(sigma[l]));
        }
        if (done == kAllLanes) continue;

        __m256i qv[kVectors], rv[kVectors];
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
    const __m256i one = _mm256_set1_epi64x(1);
    LaneState st;
    std::size_t index[kLanes] = {};
    uint64_t offset[kLanes] = {};  // order = offset + k at the first hit
    unsigned active = 0;
    std::size_t next = 0;
    uint64_t k = 0;

    auto refill = [&](int l) {
        if (next < n) {
            const uint64_t q = qs[next];
            const int sigma = floor_log2_table_unchecked(q);
            st.q[l] = q;
            st.r[l] = uint64_t{1} << sigma;
            offset[l] = static_cast<uint64_t>(sigma) - k;  // modular, k grows past it
            index[l] = next++;
            active |= 1u << l;
        } else {
            st.park(l);
            active &= ~(1u << l);
        }
    };
    for (int l = 0; l < kLanes; ++l) refill(l);

    __m256i qv[kVectors], rv[kVectors];
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

}  // namespace mdbl::kernels::avx2
