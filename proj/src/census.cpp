#include "mdbl/census.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "mdbl/dynamics.hpp"
#include "parallel.hpp"

namespace mdbl {

namespace {

bool is_small_prime(unsigned n) noexcept {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void check_exponent(unsigned n0) {
    if (n0 < 3 || n0 > kMaxCensusExponent)
        throw CapacityError("census exponent must lie in 3..127 (the bound must fit in 64 bits), got " +
                            std::to_string(n0));
    if (!is_small_prime(n0)) throw DomainError("census exponent " + std::to_string(n0) + " is not prime");
}

// Digit-by-digit square root; exact for all 128-bit inputs.
uint64_t isqrt128(unsigned __int128 n) noexcept {
    unsigned __int128 root = 0;
    unsigned __int128 bit = static_cast<unsigned __int128>(1) << 126;
    while (bit > n) bit >>= 2;
    while (bit != 0) {
        if (n >= root + bit) {
            n -= root + bit;
            root = (root >> 1) + bit;
        } else {
            root >>= 1;
        }
        bit >>= 2;
    }
    return static_cast<uint64_t>(root);
}

bool mersenne_within(unsigned j, uint64_t bound) noexcept {
    return j < 64 && (uint64_t{1} << j) - 1 <= bound;
}

}  // namespace

uint64_t sqrt_of_mersenne(unsigned n0) {
    check_exponent(n0);
    const unsigned __int128 mersenne = (static_cast<unsigned __int128>(1) << n0) - 1;
    return isqrt128(mersenne);
}

CandidateSet::CandidateSet(unsigned n0, CandidateFilter filter)
    : n0_(n0), sqrt_bound_(sqrt_of_mersenne(n0)), filter_(filter) {
    const uint64_t b = sqrt_bound_;
    if (filter_ == CandidateFilter::plus_minus_one_mod_8) {
        // 7, 15, 23, ... and 9, 17, 25, ... interleaved
        const uint64_t sevens = b >= 7 ? (b - 7) / 8 + 1 : 0;
        const uint64_t ones = b >= 9 ? (b - 9) / 8 + 1 : 0;
        size_ = sevens + ones;
    } else {
        size_ = b >= 3 ? (b - 3) / 2 + 1 : 0;
    }
}

uint64_t CandidateSet::operator[](uint64_t k) const noexcept {
    if (filter_ == CandidateFilter::all_odd) return 3 + 2 * k;
    return (k % 2 == 0 ? 7 : 9) + 8 * (k / 2);
}

std::string_view to_string(VerdictReason r) noexcept {
    switch (r) {
        case VerdictReason::no_witness: return "no-witness";
        case VerdictReason::self_witness: return "self-witness";
        case VerdictReason::external_witness: return "external-witness";
        case VerdictReason::multiple_witnesses: return "multiple-witnesses";
    }
    return "?";
}

Verdict decide(unsigned j, uint64_t witnesses, uint64_t sqrt_bound) {
    Verdict v{j, witnesses, mersenne_within(j, sqrt_bound), false, VerdictReason::no_witness};
    if (witnesses == 0) {
        v.prime = true;
    } else if (witnesses == 1) {
        v.prime = v.mersenne_within_bound;
        v.reason = v.prime ? VerdictReason::self_witness : VerdictReason::external_witness;
    } else {
        v.reason = VerdictReason::multiple_witnesses;
    }
    return v;
}

const Verdict* MersenneCensus::verdict(unsigned j) const noexcept {
    for (const auto& v : verdicts)
        if (v.j == j) return &v;
    return nullptr;
}

MersenneCensus run_census(unsigned n0, const CensusOptions& options) {
    options.kappa.validate();
    const CandidateSet set(n0, options.filter);

    MersenneCensus census;
    census.n0 = n0;
    census.sqrt_bound = set.sqrt_bound();
    census.candidates = set.size();
    census.counts.assign(n0 + 1, 0);

    const unsigned workers = detail::resolve_workers(options.workers);
    std::vector<std::vector<uint64_t>> partial(workers, std::vector<uint64_t>(n0 + 1, 0));
    auto tally = [&](unsigned w, uint64_t period) {
        if (period >= 3 && period <= n0) ++partial[w][period];
    };

    if (options.engine == Engine::batch) {
        detail::parallel_chunks(set.size(), 1 << 14, workers, [&](unsigned w, uint64_t begin, uint64_t end) {
            std::vector<uint64_t> qs(end - begin), orders(end - begin);
            for (uint64_t k = begin; k < end; ++k) qs[k - begin] = set[k];
            kernels::capped_orders(qs, n0, orders, options.backend);
            for (const uint64_t order : orders)
                if (order != kernels::kExceeded) tally(w, order);
        });
    } else {
        detail::parallel_chunks(set.size(), 1 << 12, workers, [&](unsigned w, uint64_t begin, uint64_t end) {
            for (uint64_t k = begin; k < end; ++k)
                if (const auto result = period_capped(OddModulus(set[k]), n0, options.kappa))
                    tally(w, result->period);
        });
    }

    for (const auto& local : partial)
        for (unsigned j = 0; j <= n0; ++j) census.counts[j] += local[j];
    for (unsigned j = 3; j <= n0; ++j)
        if (is_small_prime(j)) census.verdicts.push_back(decide(j, census.counts[j], census.sqrt_bound));
    return census;
}

void write_verdict_table(std::ostream& os, const MersenneCensus& census, bool tsv) {
    char line[160];
    auto row = [&](const std::string& j, const std::string& v, const std::string& relation,
                   const char* verdict, const char* reason) {
        if (tsv)
            std::snprintf(line, sizeof line, "%s\t%s\t%s\t%s\t%s\n", j.c_str(), v.c_str(),
                          relation.c_str(), verdict, reason);
        else
            std::snprintf(line, sizeof line, "%4s %8s  %-14s %-10s %s\n", j.c_str(), v.c_str(),
                          relation.c_str(), verdict, reason);
        os << line;
    };
    row("j", "v(j)", "M(j)-vs-bound", "verdict", "reason");
    row("2", "-", "-", "prime", "outside-census");
    for (const auto& v : census.verdicts) {
        const std::string relation = (v.mersenne_within_bound ? "<=" : ">") + std::to_string(census.sqrt_bound);
        row(std::to_string(v.j), std::to_string(v.witnesses), relation, v.prime ? "prime" : "composite",
            std::string(to_string(v.reason)).c_str());
    }
}

}  // namespace mdbl
