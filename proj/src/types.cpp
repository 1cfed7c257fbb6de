#include "mdbl/types.hpp"

#include <numeric>
#include <string>

#include "mdbl/floor_log2.hpp"

namespace mdbl {

OddModulus::OddModulus(uint64_t q) : q_(q) {
    if (q < 3 || q % 2 == 0)
        throw DomainError("modulus must be odd and >= 3, got " + std::to_string(q));
}

int OddModulus::segment() const noexcept { return floor_log2_table_unchecked(q_) + 1; }

Residue::Residue(uint64_t r, OddModulus q) : r_(r), q_(q) {
    if (r == 0 || r >= q.value())
        throw DomainError("residue " + std::to_string(r) + " outside 1.." +
                          std::to_string(q.value() - 1));
}

RationalAngle::RationalAngle(uint64_t p, OddModulus q) : p_(p), q_(q) {
    if (p == 0 || p >= q.value())
        throw DomainError("angle numerator must satisfy 0 < p < q");
    if (std::gcd(p, q.value()) != 1) throw DomainError("angle p/q must be in lowest terms");
}

void KappaConfig::validate() const {
    if (kappa < 1 || kappa > kMaxKappa)
        throw DomainError("kappa must lie in 1..64, got " + std::to_string(kappa));
}

uint64_t KappaConfig::boundary(OddModulus q) const noexcept {
    return kappa >= 64 ? 0 : q.value() >> kappa;
}

bool KappaConfig::admits(OddModulus q) const noexcept {
    return q.value() >= 5 && boundary(q) >= 1;
}

uint64_t FlyingTimeHistogram::period() const noexcept {
    uint64_t total = 0;
    for (unsigned t = 1; t <= kMaxFlyingTime; ++t) total += t * counts[t];
    return total;
}

uint64_t FlyingTimeHistogram::steps() const noexcept {
    uint64_t total = 0;
    for (unsigned t = 1; t <= kMaxFlyingTime; ++t) total += counts[t];
    return total;
}

}  // namespace mdbl
