#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mdbl/error.hpp"

namespace mdbl {

/// Odd q >= 3 in 64 unsigned bits; the denominator of the angle 1/q.
class OddModulus {
public:
    explicit OddModulus(uint64_t q);

    constexpr uint64_t value() const noexcept { return q_; }
    /// (q - 1) / 2. Every r <= half() can be doubled without reaching q.
    constexpr uint64_t half() const noexcept { return q_ >> 1; }
    /// The s with 2^(s-1) < q < 2^s.
    int segment() const noexcept;

    friend bool operator==(OddModulus, OddModulus) = default;

private:
    uint64_t q_;
};

/// An element r of Z_q = {1, ..., q-1}.
class Residue {
public:
    Residue(uint64_t r, OddModulus q);

    constexpr uint64_t value() const noexcept { return r_; }
    OddModulus modulus() const noexcept { return q_; }

    friend bool operator==(const Residue&, const Residue&) = default;

private:
    uint64_t r_;
    OddModulus q_;
};

/// p/q on the circle with 0 < p < q and gcd(p, q) = 1.
class RationalAngle {
public:
    RationalAngle(uint64_t p, OddModulus q);

    constexpr uint64_t numerator() const noexcept { return p_; }
    OddModulus denominator() const noexcept { return q_; }

    friend bool operator==(const RationalAngle&, const RationalAngle&) = default;

private:
    uint64_t p_;
    OddModulus q_;
};

/// One iterate of the Poincare map: next = 2^flying_time * r - q.
struct PoincareStep {
    Residue next;
    unsigned flying_time;  // 1..64

    friend bool operator==(const PoincareStep&, const PoincareStep&) = default;
};

struct PeriodResult {
    OddModulus q;
    uint64_t period;  // doubling-map period of 1/q
    uint64_t steps;   // Poincare-map period of 1, i.e. number of flights

    friend bool operator==(const PeriodResult&, const PeriodResult&) = default;
};

/// How floor(log2(.)) is evaluated on the hot path. The byte table is the
/// reference; clz uses the compiler's count-leading-zeros builtin.
enum class Log2Backend { table, clz };

/// Switch between naive and predictive Poincare steps. Residues r with
/// r <= floor(q / 2^kappa) have flying time > kappa and take the predictive
/// (floor_log2) branch; the rest are doubled one at a time.
struct KappaConfig {
    static constexpr unsigned kDefaultKappa = 2;
    static constexpr unsigned kMaxKappa = 64;

    unsigned kappa = kDefaultKappa;
    Log2Backend log2 = Log2Backend::table;

    /// Throws DomainError unless 1 <= kappa <= 64.
    void validate() const;
    /// floor(q / 2^kappa); zero when 2^kappa > q.
    uint64_t boundary(OddModulus q) const noexcept;
    /// True when q >= max(5, 2^kappa), the hybrid algorithm's precondition.
    bool admits(OddModulus q) const noexcept;
};

/// phi_q(t): how many flights of length t occur along the Poincare cycle of 1.
struct FlyingTimeHistogram {
    static constexpr unsigned kMaxFlyingTime = 64;

    OddModulus q;
    std::array<uint64_t, kMaxFlyingTime + 1> counts{};  // index 0 unused

    uint64_t operator[](unsigned t) const { return counts.at(t); }
    /// Sum of t * phi(t).
    uint64_t period() const noexcept;
    /// Sum of phi(t).
    uint64_t steps() const noexcept;

    friend bool operator==(const FlyingTimeHistogram&, const FlyingTimeHistogram&) = default;
};

}  // namespace mdbl
