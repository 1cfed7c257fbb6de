// Acceptance suite: one PASS/FAIL line per criterion, grouped in tiers.
//
//   default   criteria 1, 2, 3, 5, 7, 8 and the kappa sweep over the fast q list
//   long      criteria 4 and 6 (minutes)
//   extended  criterion 9 and the kappa sweep over the complete-number q list
//             (many CPU hours)
//
// Criteria phrased as command lines run the mdbl binary; the rest call the
// library directly. Exit status is 1 if any criterion in the tier fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "mdbl/census.hpp"
#include "mdbl/detector.hpp"
#include "mdbl/dynamics.hpp"
#include "mdbl/primality.hpp"
#include "oracles.hpp"
#include "run_command.hpp"

using namespace mdbl;

namespace {

// Pinned limits. Values are exact; only runtimes carry a tolerance.
constexpr double kOracleSweepSeconds = 60;
constexpr double kPeriodRowSeconds = 60;
constexpr double kCensus31Seconds = 5;
constexpr double kCensus61Seconds = 1800;
constexpr double kDivisorSeconds = 10;
constexpr int kRandomHistograms = 1000;
constexpr uint64_t kRandomSeed = 20240601;

const std::string kCli = MDBL_CLI_PATH;

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    std::string tier;
    std::function<Outcome()> run;
};

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::istringstream is(line);
    for (std::string field; std::getline(is, field, sep);) out.push_back(field);
    return out;
}

// Value of "key=<digits>" in a line, if present.
std::optional<uint64_t> field(const std::string& line, const std::string& key) {
    const auto at = line.find(key + "=");
    if (at == std::string::npos) return std::nullopt;
    return std::stoull(line.substr(at + key.size() + 1));
}

struct Timed {
    testing::CommandResult result;
    double seconds;
};

Timed cli(const std::string& args) {
    const auto start = Clock::now();
    auto result = testing::run_command(kCli + " " + args);
    return {std::move(result), std::chrono::duration<double>(Clock::now() - start).count()};
}

std::string secs(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", s);
    return buf;
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    KappaConfig two;
    two.kappa = 2;
    for (uint64_t q = 5; q <= 99999; q += 2) {
        const uint64_t expected = oracle::order_of_two(q);
        const uint64_t naive = period_naive(OddModulus(q)).period;
        const uint64_t hybrid = period_hybrid(OddModulus(q), two).period;
        if (naive != expected || hybrid != expected)
            return {false, "q=" + std::to_string(q) + " naive=" + std::to_string(naive) +
                               " hybrid=" + std::to_string(hybrid) + " oracle=" + std::to_string(expected)};
    }
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    return {s < kOracleSweepSeconds, "49998 q, " + secs(s) + " (limit " + secs(kOracleSweepSeconds) + ")"};
}

Outcome fast_periods() {
    const std::vector<std::pair<uint64_t, uint64_t>> rows = {
        {4398046511103ULL, 42},        {4398046511101ULL, 1938935328}, {4398046511097ULL, 5511336480},
        {4291783591ULL, 143059453},    {4291592791ULL, 143053093},     {4291434391ULL, 143047813}};
    std::string detail;
    bool pass = true;
    for (const auto& [q, expected] : rows) {
        const auto run = cli("period " + std::to_string(q));
        const auto got = run.result.exit_code == 0 ? field(run.result.out, "period") : std::nullopt;
        const bool ok = got == expected && run.seconds <= kPeriodRowSeconds;
        pass &= ok;
        detail += (detail.empty() ? "" : "; ") + std::to_string(q) + "->" +
                  (got ? std::to_string(*got) : std::string("error")) + " " + secs(run.seconds) + (ok ? "" : " [bad]");
    }
    return {pass, detail};
}

// Parses the --tsv verdict table into j -> (v, verdict).
std::map<unsigned, std::pair<uint64_t, std::string>> verdict_rows(const std::string& out) {
    std::map<unsigned, std::pair<uint64_t, std::string>> rows;
    const auto lines = lines_of(out);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto f = split(lines[i], '\t');
        if (f.size() == 5) rows[static_cast<unsigned>(std::stoul(f[0]))] = {std::stoull(f[1]), f[3]};
    }
    return rows;
}

Outcome census_31() {
    const auto run = cli("--tsv mersenne-test 31");
    if (run.result.exit_code != 0) return {false, "exit " + std::to_string(run.result.exit_code)};
    const auto rows = verdict_rows(run.result.out);
    const std::map<unsigned, uint64_t> expected_v = {{3, 1},  {5, 1},  {7, 1},  {11, 3}, {13, 1},
                                                     {17, 0}, {19, 0}, {23, 1}, {29, 3}, {31, 0}};
    const std::vector<unsigned> expected_prime = {3, 5, 7, 13, 17, 19, 31};
    bool pass = rows.size() == expected_v.size();
    std::vector<unsigned> primes;
    for (const auto& [j, v] : expected_v) {
        const auto it = rows.find(j);
        if (it == rows.end() || it->second.first != v) pass = false;
        if (it != rows.end() && it->second.second == "prime") primes.push_back(j);
    }
    pass &= primes == expected_prime;
    pass &= run.seconds < kCensus31Seconds;
    return {pass, "v(j) and verdicts exact=" + std::string(pass ? "yes" : "no") + ", " + secs(run.seconds) +
                      " (limit " + secs(kCensus31Seconds) + ")"};
}

Outcome census_61() {
    const auto run = cli("--tsv mersenne-test 61");
    if (run.result.exit_code != 0) return {false, "exit " + std::to_string(run.result.exit_code)};
    const auto rows = verdict_rows(run.result.out);
    bool pass = true;
    std::string primes, wrong;
    unsigned checked = 0;
    for (unsigned j = 3; j <= 61; ++j) {
        if (!oracle::trial_division_prime(j)) continue;
        ++checked;
        const auto it = rows.find(j);
        const bool truth = oracle::mersenne_is_prime(j);
        if (it == rows.end() || (it->second.second == "prime") != truth) {
            pass = false;
            wrong += " " + std::to_string(j);
        }
        if (truth) primes += (primes.empty() ? "" : ",") + std::to_string(j);
    }
    pass &= rows.size() == checked && run.seconds < kCensus61Seconds;
    return {pass, std::to_string(checked) + " exponents, prime {" + primes + "}" +
                      (wrong.empty() ? "" : ", mismatches:" + wrong) + ", " + secs(run.seconds) + " (limit " +
                      secs(kCensus61Seconds) + ")"};
}

Outcome divisor_witness() {
    bool pass = true;
    std::string detail;
    for (const auto& [n, q, ell] : std::vector<std::tuple<uint64_t, uint64_t, uint64_t>>{
             {11, 23, 1}, {2199023254451ULL, 4398046508903ULL, 1}}) {
        const auto run = cli("find-divisor " + std::to_string(n));
        const auto got_q = field(run.result.out, "q");
        const auto got_l = field(run.result.out, "l");
        const bool divides = oracle::pow2_mod(n, q) == 1;
        const bool ok = run.result.exit_code == 0 && got_q == q && got_l == ell && divides &&
                        run.seconds < kDivisorSeconds;
        pass &= ok;
        detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " q=" +
                  (got_q ? std::to_string(*got_q) : std::string("none")) + " 2^n mod q=" +
                  std::to_string(oracle::pow2_mod(n, q)) + " " + secs(run.seconds);
    }
    return {pass, detail + " (limit " + secs(kDivisorSeconds) + " each)"};
}

Outcome flying_time_accounting() {
    std::mt19937_64 rng(kRandomSeed);
    const auto start = Clock::now();
    for (int i = 0; i < kRandomHistograms; ++i) {
        const uint64_t q = oracle::random_odd(rng, 5, (uint64_t{1} << 32) - 1);
        const auto h = flying_time_histogram(OddModulus(q));
        uint64_t weighted = 0, count = 0;
        for (unsigned t = 1; t <= FlyingTimeHistogram::kMaxFlyingTime; ++t) {
            weighted += t * h[t];
            count += h[t];
        }
        const auto p = period_of(OddModulus(q));
        if (weighted != p.period || count != p.steps)
            return {false, "q=" + std::to_string(q) + " sum t*phi=" + std::to_string(weighted) +
                               " period=" + std::to_string(p.period)};
    }
    const bool complete = is_complete_wrt_flying_times(OddModulus(13)) && !is_complete_wrt_flying_times(OddModulus(11));
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    return {complete, std::to_string(kRandomHistograms) + " random q < 2^32 (seed " + std::to_string(kRandomSeed) +
                          "), complete(13)=yes complete(11)=no " + std::string(complete ? "ok" : "WRONG") + ", " +
                          secs(s)};
}

Outcome step_equivalence() {
    uint64_t pairs = 0;
    for (uint64_t q = 5; q <= 2001; q += 2) {
        const OddModulus m(q);
        for (uint64_t r = 1; r < q; ++r, ++pairs) {
            const Residue x(r, m);
            const auto naive = poincare_step_naive(x);
            const auto table = poincare_step_predictive(x, Log2Backend::table);
            const auto clz = poincare_step_predictive(x, Log2Backend::clz);
            const auto flight = detail::predictive_flight<Log2Backend::table>(r, q);
            if (!(naive == table && naive == clz) || flight.launch > q - 1)
                return {false, "q=" + std::to_string(q) + " r=" + std::to_string(r)};
        }
    }
    return {true, std::to_string(pairs) + " (r, q) pairs, a <= q - 1 throughout"};
}

Outcome primality() {
    const auto table = build_prime_table();
    const bool examples = is_prime(143047813, table) && is_prime(2199023254451ULL, table) && !is_prime(2047, table);
    const auto small = build_prime_table(1000);
    for (uint64_t n = 2; n <= 1'000'000; ++n) {
        const bool truth = oracle::trial_division_prime(n);
        if (is_prime(n, table) != truth || is_prime(n, small) != truth)
            return {false, "disagreement at n=" + std::to_string(n)};
    }
    return {examples, "examples " + std::string(examples ? "ok" : "WRONG") +
                          ", trial division agrees for n <= 10^6 with B = 2*10^6 and B = 1000"};
}

Outcome kappa_sweep(const std::vector<uint64_t>& qs, const std::vector<uint64_t>& expected) {
    std::string list;
    for (const auto q : qs) list += (list.empty() ? "" : ",") + std::to_string(q);
    const auto run = cli("--tsv bench-kappa --qs " + list + " --kappas 1..12");
    const auto lines = lines_of(run.result.out);
    std::string expected_periods;
    for (const auto p : expected) expected_periods += (expected_periods.empty() ? "" : ",") + std::to_string(p);
    bool pass = run.result.exit_code == 0 && lines.size() == 13;
    std::string timings;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], '\t');
        if (f.size() != 3 || f[0] != std::to_string(i) || f[2] != expected_periods) pass = false;
        if (f.size() == 3) timings += (timings.empty() ? "" : " ") + f[0] + ":" + f[1].substr(0, f[1].find('.') + 3);
    }
    return {pass, "12 rows, identical periods=" + std::string(pass ? "yes" : "no") + ", seconds by kappa " + timings +
                      " (shape reported, not asserted)"};
}

Outcome long_periods() {
    const auto period = cli("period 4398046508903");
    const bool period_ok = period.result.exit_code == 0 && field(period.result.out, "period") == 2199023254451ULL;
    const auto hist = cli("--tsv histogram 1099511611061");
    std::map<unsigned, uint64_t> phi;
    for (const auto& line : lines_of(hist.result.out)) {
        const auto f = split(line, '\t');
        if (f.size() == 2 && f[0] != "t") phi[static_cast<unsigned>(std::stoul(f[0]))] = std::stoull(f[1]);
    }
    const std::map<unsigned, uint64_t> column = {
        {1, 274877902765ULL}, {2, 137438951382ULL}, {3, 68719475692ULL}, {4, 34359737845ULL}, {5, 17179868923ULL},
        {6, 8589934462ULL},   {7, 4294967230ULL},   {8, 2147483616ULL},  {38, 2},             {39, 1},
        {40, 1}};
    bool column_ok = hist.result.exit_code == 0 && !phi.count(41) && !phi.count(42);
    for (const auto& [t, v] : column) column_ok &= phi.count(t) && phi[t] == v;
    column_ok &= field(hist.result.err, "period") == 1099511611060ULL;
    return {period_ok && column_ok, "period 4398046508903 " + std::string(period_ok ? "ok" : "WRONG") + " (" +
                                        secs(period.seconds) + "), histogram 1099511611061 column " +
                                        (column_ok ? "ok" : "WRONG") + " (" + secs(hist.seconds) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string tier = "default";
    app.add_option("--tier", tier, "default, long, extended or all")
        ->check(CLI::IsMember({"default", "long", "extended", "all"}))
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence, odd q in [5, 99999]", "default", oracle_equivalence},
        {2, "fast period rows", "default", fast_periods},
        {3, "census n0=31", "default", census_31},
        {4, "census n0=61 against ground truth", "long", census_61},
        {5, "divisor witnesses", "default", divisor_witness},
        {6, "flying-time accounting", "long", flying_time_accounting},
        {7, "step equivalence, odd q <= 2001", "default", step_equivalence},
        {8, "primality post-processing", "default", primality},
        {9, "long periods and histogram", "extended", long_periods},
        {10, "kappa sweep 1..12, fast q list", "default",
         [] { return kappa_sweep({4291783591ULL, 4291592791ULL, 4291434391ULL}, {143059453, 143053093, 143047813}); }},
        {10, "kappa sweep 1..12, complete-number q list", "extended",
         [] {
             return kappa_sweep({1099511611061ULL, 2199023246891ULL, 4398046507391ULL},
                                {1099511611060ULL, 2199023246890ULL, 2199023253695ULL});
         }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (tier != "all" && c.tier != tier) continue;
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += !outcome.pass;
        std::printf("%s [%d] %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
