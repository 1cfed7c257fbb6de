#pragma once

#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <vector>

#include "mdbl/detector.hpp"
#include "mdbl/kernels.hpp"
#include "mdbl/types.hpp"

// Census primality test for Mersenne numbers M(j), j prime, 3 <= j <= n0.
//
// Every prime divisor of M(j) is +-1 mod 8, and a composite M(j) has one
// below sqrt(M(n0)). Counting the candidates q <= floor(sqrt(M(n0))) whose
// period is exactly j gives v(j); M(j) is prime iff v(j) = 0, or v(j) = 1 and
// the single witness is M(j) itself (which requires M(j) <= the bound).

namespace mdbl {

inline constexpr unsigned kMaxCensusExponent = 127;

/// floor(sqrt(2^n0 - 1)) computed exactly. n0 must be a prime in 3..127.
uint64_t sqrt_of_mersenne(unsigned n0);

enum class CandidateFilter {
    plus_minus_one_mod_8,  // q >= 7 with q = 1 or 7 mod 8
    all_odd,               // every odd q >= 3; reference for the filter
};

/// The candidate divisors of M(j), j <= n0, in ascending order.
class CandidateSet {
public:
    explicit CandidateSet(unsigned n0, CandidateFilter filter = CandidateFilter::plus_minus_one_mod_8);

    unsigned n0() const noexcept { return n0_; }
    uint64_t sqrt_bound() const noexcept { return sqrt_bound_; }
    CandidateFilter filter() const noexcept { return filter_; }
    uint64_t size() const noexcept { return size_; }
    /// k-th member, 0 <= k < size().
    uint64_t operator[](uint64_t k) const noexcept;

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = uint64_t;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = uint64_t;

        iterator() = default;
        iterator(const CandidateSet* set, uint64_t k) : set_(set), k_(k) {}
        uint64_t operator*() const noexcept { return (*set_)[k_]; }
        iterator& operator++() noexcept { ++k_; return *this; }
        iterator operator++(int) noexcept { auto old = *this; ++k_; return old; }
        friend bool operator==(const iterator& a, const iterator& b) noexcept { return a.k_ == b.k_; }

    private:
        const CandidateSet* set_ = nullptr;
        uint64_t k_ = 0;
    };

    iterator begin() const noexcept { return {this, 0}; }
    iterator end() const noexcept { return {this, size_}; }

private:
    unsigned n0_;
    uint64_t sqrt_bound_;
    CandidateFilter filter_;
    uint64_t size_;
};

enum class VerdictReason {
    no_witness,          // v(j) = 0
    self_witness,        // v(j) = 1 and the witness is M(j) itself
    external_witness,    // v(j) = 1 but M(j) exceeds the bound
    multiple_witnesses,  // v(j) >= 2
};

std::string_view to_string(VerdictReason r) noexcept;

struct Verdict {
    unsigned j;
    uint64_t witnesses;          // v(j)
    bool mersenne_within_bound;  // M(j) <= floor(sqrt(M(n0)))
    bool prime;
    VerdictReason reason;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Applies the census rule to one exponent.
Verdict decide(unsigned j, uint64_t witnesses, uint64_t sqrt_bound);

struct MersenneCensus {
    unsigned n0 = 0;
    uint64_t sqrt_bound = 0;
    uint64_t candidates = 0;
    std::vector<uint64_t> counts;   // counts[j] = v(j) for 3 <= j <= n0; others 0
    std::vector<Verdict> verdicts;  // one per prime j in 3..n0, ascending

    uint64_t v(unsigned j) const { return j < counts.size() ? counts[j] : 0; }
    const Verdict* verdict(unsigned j) const noexcept;
};

struct CensusOptions {
    KappaConfig kappa{};
    unsigned workers = 0;  // 0: hardware concurrency
    Engine engine = Engine::batch;
    kernels::Backend backend = kernels::active_backend();
    CandidateFilter filter = CandidateFilter::plus_minus_one_mod_8;
};

/// Tallies v(j) over the candidate set with periods capped at n0, then
/// assigns verdicts. n0 must be a prime in 3..127.
MersenneCensus run_census(unsigned n0, const CensusOptions& options = {});

/// Verdict table, one row per prime j, preceded by the M(2) row which lies
/// outside the census. Columns: j, v(j), M(j) relative to the bound, verdict,
/// reason. tsv selects a tab-separated layout with a header row.
void write_verdict_table(std::ostream& os, const MersenneCensus& census, bool tsv);

}  // namespace mdbl
