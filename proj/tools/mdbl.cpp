// mdbl: periods of 1/q under the doubling map, Mersenne divisor detection and
// the census primality test, from the command line.
//
// Exit codes: 0 success, 2 usage error, 3 capacity error, 1 anything else.
// Data goes to stdout; diagnostics to stderr.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdbl/census.hpp"
#include "mdbl/detector.hpp"
#include "mdbl/dynamics.hpp"
#include "mdbl/kernels.hpp"
#include "mdbl/primality.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct CliConfig {
    unsigned kappa = mdbl::KappaConfig::kDefaultKappa;
    std::string log2 = "table";
    uint64_t prime_bound = mdbl::PrimeTable::kDefaultBound;
    std::string prime_table;
    uint64_t threshold = mdbl::kDefaultLargeThreshold;
    unsigned workers = 0;
    std::string out_dir = ".";
    bool tsv = false;
    uint64_t ell_max = 1'000'000;
    std::string engine;
    std::string simd;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

mdbl::KappaConfig kappa_config(const CliConfig& cfg, unsigned kappa) {
    mdbl::KappaConfig k;
    k.kappa = kappa;
    k.log2 = cfg.log2 == "clz" ? mdbl::Log2Backend::clz : mdbl::Log2Backend::table;
    k.validate();
    return k;
}

mdbl::kernels::Backend backend(const CliConfig& cfg) {
    if (cfg.simd.empty()) return mdbl::kernels::active_backend();
    const auto b = mdbl::kernels::parse_backend(cfg.simd);
    if (!b) throw UsageError("unknown --simd backend '" + cfg.simd + "'");
    if (!mdbl::kernels::available(*b)) throw UsageError("--simd " + cfg.simd + " is not available here");
    return *b;
}

mdbl::Engine engine(const CliConfig& cfg, mdbl::Engine fallback) {
    if (cfg.engine.empty()) return fallback;
    const auto e = mdbl::parse_engine(cfg.engine);
    if (!e) throw UsageError("unknown --engine '" + cfg.engine + "'");
    return *e;
}

mdbl::PrimeTable prime_table(const CliConfig& cfg) {
    if (!cfg.prime_table.empty()) return mdbl::load_prime_table(cfg.prime_table);
    return mdbl::build_prime_table(cfg.prime_bound);
}

// "3..7" or "5"
std::pair<unsigned, unsigned> parse_kappa_range(const std::string& text) {
    auto parse = [&](const std::string& s) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError("bad kappa range '" + text + "'");
        return static_cast<unsigned>(v);
    };
    const auto dots = text.find("..");
    const unsigned lo = parse(dots == std::string::npos ? text : text.substr(0, dots));
    const unsigned hi = dots == std::string::npos ? lo : parse(text.substr(dots + 2));
    if (lo < 1 || hi > mdbl::KappaConfig::kMaxKappa || lo > hi)
        throw UsageError("kappa range must lie within 1..64, got '" + text + "'");
    return {lo, hi};
}

int cmd_period(const CliConfig& cfg, uint64_t q) {
    const auto kappa = kappa_config(cfg, cfg.kappa);
    const mdbl::OddModulus modulus(q);
    const auto start = Clock::now();
    const auto result = mdbl::period_of(modulus, kappa);
    const double elapsed = seconds_since(start);
    if (cfg.tsv) {
        std::printf("q\tperiod\tsteps\tseconds\n%llu\t%llu\t%llu\t%.6f\n", (unsigned long long)q,
                    (unsigned long long)result.period, (unsigned long long)result.steps, elapsed);
    } else {
        std::printf("q=%llu period=%llu steps=%llu seconds=%.6f\n", (unsigned long long)q,
                    (unsigned long long)result.period, (unsigned long long)result.steps, elapsed);
    }
    return 0;
}

int cmd_scan(const CliConfig& cfg, uint64_t q_first, uint64_t q_last) {
    mdbl::ScanOptions options;
    options.kappa = kappa_config(cfg, cfg.kappa);
    options.large_threshold = cfg.threshold;
    options.workers = cfg.workers;
    options.engine = engine(cfg, options.engine);
    options.backend = backend(cfg);
    const auto table = prime_table(cfg);
    const auto report = mdbl::scan_range(q_first, q_last, table, options);
    const auto paths = mdbl::write_scan_files(report, cfg.out_dir);
    if (cfg.tsv) std::printf("stream\trecords\tpath\n");
    for (const auto s : mdbl::kAllStreams) {
        const auto i = static_cast<std::size_t>(s);
        const auto name = std::string(mdbl::to_string(s));
        const auto count = (unsigned long long)report.streams[i].size();
        if (cfg.tsv)
            std::printf("%s\t%llu\t%s\n", name.c_str(), count, paths[i].string().c_str());
        else
            std::printf("%-13s %10llu  %s\n", name.c_str(), count, paths[i].string().c_str());
    }
    std::fprintf(stderr, "scanned %llu odd q (%s)\n", (unsigned long long)report.total(),
                 report.direction == mdbl::Direction::up ? "upwards" : "downwards");
    return 0;
}

int cmd_histogram(const CliConfig& cfg, uint64_t q) {
    const auto kappa = kappa_config(cfg, cfg.kappa);
    const auto histogram = mdbl::flying_time_histogram(mdbl::OddModulus(q), kappa);
    if (cfg.tsv) std::printf("t\tphi\n");
    for (unsigned t = 1; t <= mdbl::FlyingTimeHistogram::kMaxFlyingTime; ++t) {
        if (histogram.counts[t] == 0) continue;
        std::printf(cfg.tsv ? "%u\t%llu\n" : "%3u %20llu\n", t, (unsigned long long)histogram.counts[t]);
    }
    std::fprintf(stderr, "period=%llu steps=%llu complete=%s\n", (unsigned long long)histogram.period(),
                 (unsigned long long)histogram.steps(),
                 mdbl::is_complete_wrt_flying_times(histogram) ? "yes" : "no");
    return 0;
}

int cmd_is_prime(const CliConfig& cfg, uint64_t n) {
    const auto table = prime_table(cfg);
    const bool prime = mdbl::is_prime(n, table);
    std::printf(cfg.tsv ? "n\tverdict\n%llu\t%s\n" : "%llu %s\n", (unsigned long long)n,
                prime ? "prime" : "composite");
    return 0;
}

int cmd_find_divisor(const CliConfig& cfg, uint64_t n, const std::string& check) {
    mdbl::DivisorSearchOptions options;
    options.kappa = kappa_config(cfg, cfg.kappa);
    options.ell_max = cfg.ell_max;
    if (check == "capped-period") options.check = mdbl::DivisorCheck::capped_period;
    else if (check != "orbit-jump") throw UsageError("unknown --check '" + check + "'");
    const auto table = prime_table(cfg);
    const auto start = Clock::now();
    const auto witness = mdbl::find_divisor_of_mersenne(n, table, options);
    const double elapsed = seconds_since(start);
    if (cfg.tsv) std::printf("n\tq\tl\n");
    if (witness) {
        std::printf(cfg.tsv ? "%llu\t%llu\t%llu\n" : "n=%llu q=%llu l=%llu\n", (unsigned long long)n,
                    (unsigned long long)witness->q, (unsigned long long)witness->ell);
    } else {
        std::printf(cfg.tsv ? "%llu\tnone\tnone\n" : "n=%llu none found\n", (unsigned long long)n);
    }
    std::fprintf(stderr, "l_max=%llu seconds=%.6f\n", (unsigned long long)options.ell_max, elapsed);
    return 0;
}

int cmd_mersenne_test(const CliConfig& cfg, unsigned n0) {
    mdbl::CensusOptions options;
    options.kappa = kappa_config(cfg, cfg.kappa);
    options.workers = cfg.workers;
    options.engine = engine(cfg, options.engine);
    options.backend = backend(cfg);
    const auto start = Clock::now();
    const auto census = mdbl::run_census(n0, options);
    const double elapsed = seconds_since(start);
    mdbl::write_verdict_table(std::cout, census, cfg.tsv);
    std::cout.flush();
    std::fprintf(stderr, "n0=%u sqrt_bound=%llu candidates=%llu engine=%s simd=%s seconds=%.3f\n", n0,
                 (unsigned long long)census.sqrt_bound, (unsigned long long)census.candidates,
                 std::string(mdbl::to_string(options.engine)).c_str(),
                 std::string(mdbl::kernels::to_string(options.backend)).c_str(), elapsed);
    return 0;
}

int cmd_bench_kappa(const CliConfig& cfg, const std::vector<uint64_t>& qs, const std::string& kappas) {
    if (qs.empty()) throw UsageError("bench-kappa needs at least one q");
    const auto [lo, hi] = parse_kappa_range(kappas);
    for (unsigned kappa = lo; kappa <= hi; ++kappa) {
        const auto k = kappa_config(cfg, kappa);
        for (const uint64_t q : qs)
            if (q % 2 == 0 || q < 3 || !k.admits(mdbl::OddModulus(q)))
                throw UsageError("q=" + std::to_string(q) + " is not odd and >= max(5, 2^" +
                                 std::to_string(kappa) + ")");
    }
    std::optional<std::vector<uint64_t>> reference;
    if (cfg.tsv) std::printf("kappa\tseconds\tperiods\n");
    for (unsigned kappa = lo; kappa <= hi; ++kappa) {
        const auto k = kappa_config(cfg, kappa);
        std::vector<uint64_t> periods;
        const auto start = Clock::now();
        for (const uint64_t q : qs) periods.push_back(mdbl::period_hybrid(mdbl::OddModulus(q), k).period);
        const double elapsed = seconds_since(start);
        std::string list;
        for (const auto p : periods) list += (list.empty() ? "" : ",") + std::to_string(p);
        std::printf(cfg.tsv ? "%u\t%.6f\t%s\n" : "kappa=%-3u seconds=%-12.6f periods=%s\n", kappa, elapsed,
                    list.c_str());
        std::fflush(stdout);
        if (!reference) reference = periods;
        else if (*reference != periods) {
            std::fprintf(stderr, "error: periods differ between kappa values\n");
            return 1;
        }
    }
    return 0;
}

int cmd_prime_table(const CliConfig& cfg, const std::string& path) {
    const auto table = mdbl::build_prime_table(cfg.prime_bound);
    mdbl::save_prime_table(table, path);
    std::printf(cfg.tsv ? "bound\tcount\tpath\n%llu\t%llu\t%s\n" : "bound=%llu count=%llu path=%s\n",
                (unsigned long long)table.bound(), (unsigned long long)table.primes().size(), path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periods of 1/q under the doubling map and Mersenne number tests"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all");

    CliConfig cfg;
    app.add_option("--kappa", cfg.kappa, "Critical flying-time boundary kappa (1..64)")
        ->envname("MDBL_KAPPA")
        ->capture_default_str();
    app.add_option("--log2", cfg.log2, "floor(log2) backend: table or clz")
        ->envname("MDBL_LOG2")
        ->check(CLI::IsMember({"table", "clz"}))
        ->capture_default_str();
    app.add_option("--prime-bound", cfg.prime_bound, "Sieve bound B of the prime table")
        ->envname("MDBL_PRIME_BOUND")
        ->capture_default_str();
    app.add_option("--prime-table", cfg.prime_table, "Load a PTAB binary prime table instead of sieving")
        ->envname("MDBL_PRIME_TABLE");
    app.add_option("--threshold", cfg.threshold, "Prime periods above this go to the large stream")
        ->envname("MDBL_THRESHOLD")
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads (0: all cores)")
        ->envname("MDBL_WORKERS")
        ->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, "Directory for scan output files")
        ->envname("MDBL_OUT_DIR")
        ->capture_default_str();
    app.add_flag("--tsv", cfg.tsv, "Strict tab-separated output")->envname("MDBL_TSV");
    app.add_option("--l-max", cfg.ell_max, "Largest ell tried by find-divisor")
        ->envname("MDBL_L_MAX")
        ->capture_default_str();
    app.add_option("--engine", cfg.engine, "Period engine for scan/mersenne-test: hybrid or batch")
        ->envname("MDBL_ENGINE");
    app.add_option("--simd", cfg.simd, "Batch kernel backend: scalar, avx2 or neon")->envname("MDBL_SIMD");

    uint64_t q = 0, q_first = 0, q_last = 0, n = 0;
    unsigned n0 = 0;
    std::string check = "orbit-jump", kappas = "1..12", path;
    std::vector<uint64_t> qs;

    auto* period = app.add_subcommand("period", "Period of 1/q, Poincare steps and timing");
    period->add_option("q", q, "Odd modulus q >= 3")->required();
    auto* scan = app.add_subcommand("scan", "Periods of all odd q in a range, written to four stream files");
    scan->add_option("q_first", q_first, "First odd endpoint")->required();
    scan->add_option("q_last", q_last, "Last odd endpoint (smaller than q_first scans downwards)")->required();
    auto* histogram = app.add_subcommand("histogram", "Flying-time frequencies of 1/q");
    histogram->add_option("q", q, "Odd modulus q >= 5")->required();
    auto* is_prime = app.add_subcommand("is-prime", "Table-based primality check");
    is_prime->add_option("n", n, "Integer >= 2 and <= B^2")->required();
    auto* find_divisor = app.add_subcommand("find-divisor", "Smallest divisor 1 + 2 n l of M(n)");
    find_divisor->add_option("n", n, "Prime exponent")->required();
    find_divisor->add_option("--check", check, "orbit-jump or capped-period")->capture_default_str();
    auto* mersenne_test = app.add_subcommand("mersenne-test", "Census verdicts for M(j), j prime <= n0");
    mersenne_test->add_option("n0", n0, "Prime exponent in 3..127")->required();
    auto* bench_kappa = app.add_subcommand("bench-kappa", "Hybrid-period timings per kappa");
    bench_kappa->add_option("--qs", qs, "Comma separated odd q values")->delimiter(',')->required();
    bench_kappa->add_option("--kappas", kappas, "Kappa range, e.g. 1..12")->capture_default_str();
    auto* save_table = app.add_subcommand("prime-table", "Sieve up to --prime-bound and save a PTAB file");
    save_table->add_option("path", path, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*period) return cmd_period(cfg, q);
        if (*scan) return cmd_scan(cfg, q_first, q_last);
        if (*histogram) return cmd_histogram(cfg, q);
        if (*is_prime) return cmd_is_prime(cfg, n);
        if (*find_divisor) return cmd_find_divisor(cfg, n, check);
        if (*mersenne_test) return cmd_mersenne_test(cfg, n0);
        if (*bench_kappa) return cmd_bench_kappa(cfg, qs, kappas);
        if (*save_table) return cmd_prime_table(cfg, path);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const mdbl::DomainError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const mdbl::CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return kExitCapacity;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
