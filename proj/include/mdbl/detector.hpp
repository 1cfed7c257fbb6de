#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdbl/kernels.hpp"
#include "mdbl/primality.hpp"
#include "mdbl/types.hpp"

// Mersenne non-primality detection. If 1/q has a prime period n then q
// divides M(n) = 2^n - 1, so M(n) is composite without ever being formed.

namespace mdbl {

/// How periods are computed over many q: one hybrid Poincare walk per q, or
/// the batched Delta_q kernels (SIMD when available).
enum class Engine { hybrid, batch };

std::string_view to_string(Engine e) noexcept;
std::optional<Engine> parse_engine(std::string_view name) noexcept;

/// One output row: segment s with 2^(s-1) < q < 2^s, q, and its period.
struct PeriodRecord {
    int segment;
    OddModulus q;
    uint64_t period;

    static PeriodRecord from(const PeriodResult& result);
    friend bool operator==(const PeriodRecord&, const PeriodRecord&) = default;
};

enum class Stream { large_prime, small_prime, odd_nonprime, even };
inline constexpr std::array<Stream, 4> kAllStreams = {Stream::large_prime, Stream::small_prime,
                                                      Stream::odd_nonprime, Stream::even};

std::string_view to_string(Stream s) noexcept;
/// File name used by write_scan_files, e.g. "large_prime_periods.tsv".
std::string_view stream_file_name(Stream s) noexcept;

/// Exponent of the 52nd known Mersenne prime.
inline constexpr uint64_t kDefaultLargeThreshold = 136'279'841;

/// Even period -> even; odd non-prime -> odd_nonprime; prime above the
/// threshold -> large_prime; other primes -> small_prime.
/// Throws CapacityError when the period exceeds the table's B^2.
Stream classify(const PeriodRecord& record, const PrimeTable& table,
                uint64_t large_threshold = kDefaultLargeThreshold);

enum class Direction { up, down };

struct ScanOptions {
    KappaConfig kappa{};
    uint64_t large_threshold = kDefaultLargeThreshold;
    unsigned workers = 0;  // 0: hardware concurrency
    Engine engine = Engine::batch;
    kernels::Backend backend = kernels::active_backend();
};

struct ScanReport {
    uint64_t q_first = 0;
    uint64_t q_last = 0;
    Direction direction = Direction::up;
    uint64_t large_threshold = kDefaultLargeThreshold;
    // Sorted by (period, q), except `even` which is sorted by q.
    std::array<std::vector<PeriodRecord>, 4> streams;

    const std::vector<PeriodRecord>& stream(Stream s) const {
        return streams[static_cast<std::size_t>(s)];
    }
    std::size_t total() const noexcept;
};

/// Periods of every odd q between the endpoints, inclusive. The walk runs
/// downwards when q_first > q_last. Both endpoints must be odd and
/// >= max(5, 2^kappa); violations throw DomainError before any work.
ScanReport scan_range(uint64_t q_first, uint64_t q_last, const PrimeTable& table,
                      const ScanOptions& options = {});

/// "segm<TAB>q<TAB>period"
std::string format_record(const PeriodRecord& record);

/// Writes the four stream files into dir (created if missing), one record
/// per LF-terminated line, no header. Returns the paths in kAllStreams order.
std::array<std::filesystem::path, 4> write_scan_files(const ScanReport& report,
                                                      const std::filesystem::path& dir);

/// How a candidate q is tested for dividing M(n).
enum class DivisorCheck {
    orbit_jump,     // Delta_q^n(1) == 1 via jump(), O(log n)
    capped_period,  // period_capped(q, n) == n, O(min(period, n))
};

struct DivisorSearchOptions {
    KappaConfig kappa{};
    uint64_t ell_max = 1'000'000;
    DivisorCheck check = DivisorCheck::orbit_jump;
};

struct DivisorWitness {
    uint64_t q;
    uint64_t ell;

    friend bool operator==(const DivisorWitness&, const DivisorWitness&) = default;
};

/// Smallest q = 1 + 2 n ell (ell = 1..ell_max, q = +-1 mod 8, q < M(n),
/// q < 2^64) whose period is exactly n, i.e. a proper divisor of M(n).
/// n must be a prime >= 3 within the table's capacity.
std::optional<DivisorWitness> find_divisor_of_mersenne(uint64_t n, const PrimeTable& table,
                                                       const DivisorSearchOptions& options = {});

}  // namespace mdbl
