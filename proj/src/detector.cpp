#include "mdbl/detector.hpp"

#include <algorithm>
#include <fstream>

#include "mdbl/dynamics.hpp"
#include "parallel.hpp"

namespace mdbl {

namespace {

using Streams = std::array<std::vector<PeriodRecord>, 4>;

void check_endpoint(uint64_t q, const KappaConfig& kappa) {
    if (q % 2 == 0) throw DomainError("scan endpoint " + std::to_string(q) + " is even");
    if (q < 5 || !kappa.admits(OddModulus(q)))
        throw DomainError("scan endpoint " + std::to_string(q) + " is below max(5, 2^kappa) for kappa=" +
                          std::to_string(kappa.kappa));
}

bool by_period(const PeriodRecord& a, const PeriodRecord& b) {
    return a.period != b.period ? a.period < b.period : a.q.value() < b.q.value();
}

bool by_q(const PeriodRecord& a, const PeriodRecord& b) { return a.q.value() < b.q.value(); }

}  // namespace

std::string_view to_string(Engine e) noexcept {
    return e == Engine::hybrid ? "hybrid" : "batch";
}

std::optional<Engine> parse_engine(std::string_view name) noexcept {
    if (name == "hybrid") return Engine::hybrid;
    if (name == "batch") return Engine::batch;
    return std::nullopt;
}

PeriodRecord PeriodRecord::from(const PeriodResult& result) {
    return {result.q.segment(), result.q, result.period};
}

std::string_view to_string(Stream s) noexcept {
    switch (s) {
        case Stream::large_prime: return "large-prime";
        case Stream::small_prime: return "small-prime";
        case Stream::odd_nonprime: return "odd-nonprime";
        case Stream::even: return "even";
    }
    return "?";
}

std::string_view stream_file_name(Stream s) noexcept {
    switch (s) {
        case Stream::large_prime: return "large_prime_periods.tsv";
        case Stream::small_prime: return "small_prime_periods.tsv";
        case Stream::odd_nonprime: return "odd_nonprime_periods.tsv";
        case Stream::even: return "even_periods.tsv";
    }
    return "?";
}

Stream classify(const PeriodRecord& record, const PrimeTable& table, uint64_t large_threshold) {
    if (record.period % 2 == 0) return Stream::even;
    if (record.period < 2 || !is_prime(record.period, table)) return Stream::odd_nonprime;
    return record.period > large_threshold ? Stream::large_prime : Stream::small_prime;
}

std::size_t ScanReport::total() const noexcept {
    std::size_t n = 0;
    for (const auto& s : streams) n += s.size();
    return n;
}

ScanReport scan_range(uint64_t q_first, uint64_t q_last, const PrimeTable& table,
                      const ScanOptions& options) {
    options.kappa.validate();
    check_endpoint(q_first, options.kappa);
    check_endpoint(q_last, options.kappa);

    ScanReport report;
    report.q_first = q_first;
    report.q_last = q_last;
    report.direction = q_first <= q_last ? Direction::up : Direction::down;
    report.large_threshold = options.large_threshold;

    const uint64_t lo = std::min(q_first, q_last), hi = std::max(q_first, q_last);
    const uint64_t count = (hi - lo) / 2 + 1;
    const bool up = report.direction == Direction::up;
    auto q_at = [&](uint64_t i) { return up ? q_first + 2 * i : q_first - 2 * i; };

    const unsigned workers = detail::resolve_workers(options.workers);
    std::vector<Streams> partial(workers);
    auto emit = [&](unsigned w, PeriodRecord record) {
        const Stream s = classify(record, table, options.large_threshold);
        partial[w][static_cast<std::size_t>(s)].push_back(record);
    };

    if (options.engine == Engine::hybrid) {
        detail::parallel_chunks(count, 256, workers, [&](unsigned w, uint64_t begin, uint64_t end) {
            for (uint64_t i = begin; i < end; ++i)
                emit(w, PeriodRecord::from(period_of(OddModulus(q_at(i)), options.kappa)));
        });
    } else {
        detail::parallel_chunks(count, 4096, workers, [&](unsigned w, uint64_t begin, uint64_t end) {
            std::vector<uint64_t> qs(end - begin), orders(end - begin);
            for (uint64_t i = begin; i < end; ++i) qs[i - begin] = q_at(i);
            kernels::full_orders(qs, orders, options.backend);
            for (std::size_t k = 0; k < qs.size(); ++k) {
                const OddModulus q(qs[k]);
                emit(w, PeriodRecord{q.segment(), q, orders[k]});
            }
        });
    }

    for (auto& worker : partial)
        for (std::size_t s = 0; s < worker.size(); ++s)
            report.streams[s].insert(report.streams[s].end(), worker[s].begin(), worker[s].end());
    for (const Stream s : kAllStreams) {
        auto& records = report.streams[static_cast<std::size_t>(s)];
        std::sort(records.begin(), records.end(), s == Stream::even ? by_q : by_period);
    }
    return report;
}

std::string format_record(const PeriodRecord& record) {
    return std::to_string(record.segment) + '\t' + std::to_string(record.q.value()) + '\t' +
           std::to_string(record.period);
}

std::array<std::filesystem::path, 4> write_scan_files(const ScanReport& report,
                                                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::array<std::filesystem::path, 4> paths;
    for (const Stream s : kAllStreams) {
        const auto path = dir / stream_file_name(s);
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw DomainError("cannot open " + path.string() + " for writing");
        for (const auto& record : report.stream(s)) os << format_record(record) << '\n';
        if (!os) throw DomainError("failed writing " + path.string());
        paths[static_cast<std::size_t>(s)] = path;
    }
    return paths;
}

std::optional<DivisorWitness> find_divisor_of_mersenne(uint64_t n, const PrimeTable& table,
                                                       const DivisorSearchOptions& options) {
    options.kappa.validate();
    if (n < 3 || !is_prime(n, table))
        throw DomainError("find_divisor_of_mersenne: exponent " + std::to_string(n) +
                          " is not a prime >= 3");
    if (n > (UINT64_MAX - 1) / 2) return std::nullopt;  // even ell = 1 overflows
    const uint64_t step = 2 * n;
    // Only proper divisors count: M(n) itself is always one when n < 64.
    const uint64_t q_limit = n < 64 ? (uint64_t{1} << n) - 2 : UINT64_MAX;
    for (uint64_t ell = 1; ell <= options.ell_max; ++ell) {
        if (ell > (q_limit - 1) / step) break;
        const uint64_t q = 1 + step * ell;
        if (q % 8 != 1 && q % 8 != 7) continue;
        const OddModulus modulus(q);
        bool divides;
        if (options.check == DivisorCheck::orbit_jump) {
            divides = jump(Residue(1, modulus), n).value() == 1;
        } else {
            const auto result = period_capped(modulus, n, options.kappa);
            divides = result && result->period == n;
        }
        if (divides) return DivisorWitness{q, ell};
    }
    return std::nullopt;
}

}  // namespace mdbl
