#pragma once

#include <cstdint>
#include <optional>

#include "mdbl/floor_log2.hpp"
#include "mdbl/types.hpp"

// The doubling map on Z_q and its Poincare compression.
//
// Delta_q(r) = 2r mod q. The Poincare map pi_q jumps over every doubling that
// stays below q: pi_q(r) = 2^p r - q with p minimal such that 2^p r >= q. The
// period of 1/q under the circle doubling map (the multiplicative order of 2
// mod q) is the sum of the flying times p over the pi_q cycle of 1.
//
// All reductions are written as a - (q - a), never 2a - q: the latter overflows
// once q exceeds 2^63.

namespace mdbl {

/// Delta_q(r) = 2r mod q.
Residue integer_doubling_step(Residue r);

/// delta(p/q) = 2p/q mod 1.
RationalAngle double_angle(RationalAngle theta);

/// One pi_q iterate found by doubling until the value passes (q-1)/2.
/// Requires q >= 5.
PoincareStep poincare_step_naive(Residue r);

/// One pi_q iterate with the flying time predicted from floor_log2((q-1)/r).
/// Requires q >= 5. Agrees with poincare_step_naive on every input.
PoincareStep poincare_step_predictive(Residue r, Log2Backend log2 = Log2Backend::table);

/// Period of 1/q by naive Poincare steps only. Requires q >= 5.
PeriodResult period_naive(OddModulus q);

/// Period of 1/q, choosing per residue between naive and predictive steps
/// using the kappa boundary. Requires q >= max(5, 2^kappa).
PeriodResult period_hybrid(OddModulus q, const KappaConfig& cfg = {});

/// Total over odd q >= 3: q = 3 gives 2, q >= 2^kappa goes through
/// period_hybrid, anything else through period_naive.
PeriodResult period_of(OddModulus q, const KappaConfig& cfg = {});

/// period_of, abandoned as soon as the accumulated period exceeds cap.
/// Returns nullopt in that case. Cost is O(min(period, cap)) flights.
std::optional<PeriodResult> period_capped(OddModulus q, uint64_t cap,
                                          const KappaConfig& cfg = {});

/// Delta_q applied `steps` times, r * 2^steps mod q, by square-and-double
/// over the bits of steps. O(log steps) 128-bit multiplications.
Residue jump(Residue r, uint64_t steps);

/// phi_q(t) over the pi_q cycle of 1. Requires q >= 5.
FlyingTimeHistogram flying_time_histogram(OddModulus q, const KappaConfig& cfg = {});

/// True when every flying time 1..segment(q) occurs on the cycle of 1.
bool is_complete_wrt_flying_times(OddModulus q, const KappaConfig& cfg = {});
bool is_complete_wrt_flying_times(const FlyingTimeHistogram& histogram);

namespace detail {

// A flight ends at launch = r * 2^(flying_time - 1), which lies in
// ((q-1)/2, q-1]; the next residue is launch - (q - launch).
struct Flight {
    uint64_t launch;
    unsigned flying_time;
};

/// Naive flight from r in Z_q; q odd >= 5.
inline Flight naive_flight(uint64_t r, uint64_t q) noexcept {
    const uint64_t qh = q >> 1;
    unsigned t = 0;
    while (r <= qh) {
        r += r;
        ++t;
    }
    return {r, t + 1};
}

/// Predictive flight: t = floor_log2((q-1)/r), a = r * 2^t. a <= q - 1 always.
template <Log2Backend B>
inline Flight predictive_flight(uint64_t r, uint64_t q) noexcept {
    const unsigned t = static_cast<unsigned>(floor_log2_unchecked<B>((q - 1) / r));
    return {r << t, t + 1};
}

}  // namespace detail

}  // namespace mdbl
