#include "mdbl/dynamics.hpp"

#include <string>

namespace mdbl {

namespace {

void require_at_least_five(OddModulus q, const char* who) {
    if (q.value() < 5)
        throw DomainError(std::string(who) + ": requires q >= 5, got " + std::to_string(q.value()));
}

void require_admitted(OddModulus q, const KappaConfig& cfg, const char* who) {
    cfg.validate();
    if (!cfg.admits(q))
        throw DomainError(std::string(who) + ": requires q >= max(5, 2^kappa); q=" +
                          std::to_string(q.value()) + " kappa=" + std::to_string(cfg.kappa));
}

// Walks the pi_q cycle of 1 and hands each flying time to on_flight, which
// returns false to stop early. Returns false when stopped.
template <class OnFlight>
bool walk_naive(uint64_t q, OnFlight&& on_flight) {
    uint64_t r = 1;
    do {
        const auto [a, ft] = detail::naive_flight(r, q);
        r = a - (q - a);
        if (!on_flight(ft)) return false;
    } while (r != 1);
    return true;
}

template <Log2Backend B, class OnFlight>
bool walk_hybrid(uint64_t q, unsigned kappa, OnFlight&& on_flight) {
    const uint64_t qh = q >> 1;
    const uint64_t r_boundary = q >> kappa;

    // pi_q(1) always flies floor_log2(q) + 1.
    const int sigma = floor_log2_unchecked<B>(q);
    const uint64_t first = uint64_t{1} << sigma;
    uint64_t r = first - (q - first);
    if (!on_flight(static_cast<unsigned>(sigma) + 1)) return false;

    while (r != 1) {
        uint64_t a;
        unsigned ft;
        if (r > r_boundary) {
            a = r;
            ft = 1;
            while (a <= qh) {
                a += a;
                ++ft;
            }
        } else {
            const auto flight = detail::predictive_flight<B>(r, q);
            a = flight.launch;
            ft = flight.flying_time;
        }
        r = a - (q - a);
        if (!on_flight(ft)) return false;
    }
    return true;
}

template <class OnFlight>
bool walk_hybrid(uint64_t q, const KappaConfig& cfg, OnFlight&& on_flight) {
    if (cfg.log2 == Log2Backend::table)
        return walk_hybrid<Log2Backend::table>(q, cfg.kappa, on_flight);
    return walk_hybrid<Log2Backend::clz>(q, cfg.kappa, on_flight);
}

// Hybrid when kappa admits q, naive otherwise. q >= 5.
template <class OnFlight>
bool walk_best(OddModulus q, const KappaConfig& cfg, OnFlight&& on_flight) {
    if (cfg.admits(q)) return walk_hybrid(q.value(), cfg, on_flight);
    return walk_naive(q.value(), on_flight);
}

}  // namespace

Residue integer_doubling_step(Residue r) {
    const uint64_t q = r.modulus().value();
    const uint64_t x = r.value();
    return Residue(x <= r.modulus().half() ? x + x : x - (q - x), r.modulus());
}

RationalAngle double_angle(RationalAngle theta) {
    const Residue doubled = integer_doubling_step(Residue(theta.numerator(), theta.denominator()));
    return RationalAngle(doubled.value(), theta.denominator());
}

PoincareStep poincare_step_naive(Residue r) {
    const OddModulus q = r.modulus();
    require_at_least_five(q, "poincare_step_naive");
    const auto [a, ft] = detail::naive_flight(r.value(), q.value());
    return {Residue(a - (q.value() - a), q), ft};
}

PoincareStep poincare_step_predictive(Residue r, Log2Backend log2) {
    const OddModulus q = r.modulus();
    require_at_least_five(q, "poincare_step_predictive");
    const auto [a, ft] = log2 == Log2Backend::table
                             ? detail::predictive_flight<Log2Backend::table>(r.value(), q.value())
                             : detail::predictive_flight<Log2Backend::clz>(r.value(), q.value());
    return {Residue(a - (q.value() - a), q), ft};
}

PeriodResult period_naive(OddModulus q) {
    require_at_least_five(q, "period_naive");
    uint64_t period = 0, steps = 0;
    walk_naive(q.value(), [&](unsigned ft) {
        period += ft;
        ++steps;
        return true;
    });
    return {q, period, steps};
}

PeriodResult period_hybrid(OddModulus q, const KappaConfig& cfg) {
    require_admitted(q, cfg, "period_hybrid");
    uint64_t period = 0, steps = 0;
    walk_hybrid(q.value(), cfg, [&](unsigned ft) {
        period += ft;
        ++steps;
        return true;
    });
    return {q, period, steps};
}

PeriodResult period_of(OddModulus q, const KappaConfig& cfg) {
    cfg.validate();
    if (q.value() == 3) return {q, 2, 1};
    if (cfg.admits(q)) return period_hybrid(q, cfg);
    return period_naive(q);
}

std::optional<PeriodResult> period_capped(OddModulus q, uint64_t cap, const KappaConfig& cfg) {
    cfg.validate();
    if (cap == 0) throw DomainError("period_capped: cap must be >= 1");
    if (q.value() == 3) {
        if (cap < 2) return std::nullopt;
        return PeriodResult{q, 2, 1};
    }
    uint64_t period = 0, steps = 0;
    const bool finished = walk_best(q, cfg, [&](unsigned ft) {
        period += ft;
        ++steps;
        return period <= cap;
    });
    if (!finished) return std::nullopt;
    return PeriodResult{q, period, steps};
}

Residue jump(Residue r, uint64_t steps) {
    const uint64_t q = r.modulus().value();
    const uint64_t qh = r.modulus().half();
    // x tracks 2^(bits of steps seen so far) mod q.
    uint64_t x = 1;
    for (int bit = steps ? floor_log2_table_unchecked(steps) : -1; bit >= 0; --bit) {
        x = static_cast<uint64_t>(static_cast<unsigned __int128>(x) * x % q);
        if ((steps >> bit) & 1) x = x <= qh ? x + x : x - (q - x);
    }
    return Residue(static_cast<uint64_t>(static_cast<unsigned __int128>(x) * r.value() % q),
                   r.modulus());
}

FlyingTimeHistogram flying_time_histogram(OddModulus q, const KappaConfig& cfg) {
    cfg.validate();
    require_at_least_five(q, "flying_time_histogram");
    FlyingTimeHistogram histogram{q, {}};
    walk_best(q, cfg, [&](unsigned ft) {
        ++histogram.counts[ft];
        return true;
    });
    return histogram;
}

bool is_complete_wrt_flying_times(const FlyingTimeHistogram& histogram) {
    const int s = histogram.q.segment();
    for (int t = 1; t <= s; ++t)
        if (histogram.counts[static_cast<unsigned>(t)] == 0) return false;
    return true;
}

bool is_complete_wrt_flying_times(OddModulus q, const KappaConfig& cfg) {
    return is_complete_wrt_flying_times(flying_time_histogram(q, cfg));
}

}  // namespace mdbl
