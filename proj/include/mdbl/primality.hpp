#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mdbl/error.hpp"

namespace mdbl {

/// All odd primes in [3, B], ascending. Decides primality of every n <= B^2.
class PrimeTable {
public:
    static constexpr uint64_t kMinBound = 3;
    static constexpr uint64_t kMaxBound = uint64_t{1} << 32;
    static constexpr uint64_t kDefaultBound = 2'000'000;

    /// Validates bound range, ordering, first element 3 and last <= bound.
    PrimeTable(uint64_t bound, std::vector<uint32_t> primes);

    uint64_t bound() const noexcept { return bound_; }
    std::span<const uint32_t> primes() const noexcept { return primes_; }
    /// B^2, saturated at 2^64 - 1.
    uint64_t capacity() const noexcept;

private:
    uint64_t bound_;
    std::vector<uint32_t> primes_;
};

/// Sieve of Eratosthenes over [2, bound]. Requires 3 <= bound <= 2^32.
PrimeTable build_prime_table(uint64_t bound = PrimeTable::kDefaultBound);

/// Three cases: even n is prime only when n = 2; odd n <= B is looked up by
/// binary search; odd n in (B, B^2] is tested against table primes up to
/// isqrt(n). Throws DomainError for n < 2 and CapacityError for n > B^2.
bool is_prime(uint64_t n, const PrimeTable& table);

/// floor(sqrt(n)) by integer Newton iteration plus a final correction.
uint64_t isqrt(uint64_t n) noexcept;

/// Binary table file, all fields little-endian:
///   "PTAB" | u32 version (1) | u64 count | u64 bound | count x u64 prime
void save_prime_table(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable load_prime_table(const std::filesystem::path& path);

}  // namespace mdbl
