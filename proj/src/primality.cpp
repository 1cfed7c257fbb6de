#include "mdbl/primality.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <string>

#include "mdbl/floor_log2.hpp"

namespace mdbl {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'T', 'A', 'B'};
constexpr uint32_t kFormatVersion = 1;

void check_bound(uint64_t bound) {
    if (bound < PrimeTable::kMinBound || bound > PrimeTable::kMaxBound)
        throw DomainError("prime table bound must lie in [3, 2^32], got " + std::to_string(bound));
}

template <class T>
void put_le(std::ostream& os, T value) {
    char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    os.write(bytes, sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw DomainError("prime table file is truncated");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
}

}  // namespace

PrimeTable::PrimeTable(uint64_t bound, std::vector<uint32_t> primes)
    : bound_(bound), primes_(std::move(primes)) {
    check_bound(bound_);
    if (primes_.empty() || primes_.front() != 3)
        throw DomainError("prime table must start at 3");
    if (primes_.back() > bound_) throw DomainError("prime table exceeds its bound");
    if (std::adjacent_find(primes_.begin(), primes_.end(), std::greater_equal<>{}) != primes_.end())
        throw DomainError("prime table is not strictly increasing");
}

uint64_t PrimeTable::capacity() const noexcept {
    const unsigned __int128 square = static_cast<unsigned __int128>(bound_) * bound_;
    return square > UINT64_MAX ? UINT64_MAX : static_cast<uint64_t>(square);
}

PrimeTable build_prime_table(uint64_t bound) {
    check_bound(bound);
    // composite[i] describes the odd number 2i + 1.
    const uint64_t slots = (bound - 1) / 2 + 1;
    std::vector<bool> composite(slots, false);
    for (uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= bound; ++i) {
        if (composite[i]) continue;
        const uint64_t p = 2 * i + 1;
        for (uint64_t j = (p * p) / 2; j < slots; j += p) composite[j] = true;
    }
    std::vector<uint32_t> primes;
    for (uint64_t i = 1; i < slots; ++i)
        if (!composite[i]) primes.push_back(static_cast<uint32_t>(2 * i + 1));
    return PrimeTable(bound, std::move(primes));
}

uint64_t isqrt(uint64_t n) noexcept {
    if (n < 2) return n;
    // Start above the root; Newton then decreases monotonically to it.
    uint64_t x = uint64_t{1} << (floor_log2_table_unchecked(n) / 2 + 1);
    for (;;) {
        const uint64_t y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    while (static_cast<unsigned __int128>(x) * x > n) --x;
    while (static_cast<unsigned __int128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

bool is_prime(uint64_t n, const PrimeTable& table) {
    if (n < 2) throw DomainError("is_prime: n must be >= 2, got " + std::to_string(n));
    if (n > table.capacity())
        throw CapacityError("is_prime: " + std::to_string(n) + " exceeds the table capacity B^2 = " +
                            std::to_string(table.capacity()) + "; rebuild with a larger bound");
    if (n % 2 == 0) return n == 2;
    const auto primes = table.primes();
    if (n <= table.bound()) return std::binary_search(primes.begin(), primes.end(), n);
    const uint64_t root = isqrt(n);
    for (const uint64_t p : primes) {
        if (p > root) break;
        if (n % p == 0) return false;
    }
    return true;
}

void save_prime_table(const PrimeTable& table, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DomainError("cannot open " + path.string() + " for writing");
    os.write(kMagic.data(), kMagic.size());
    put_le<uint32_t>(os, kFormatVersion);
    put_le<uint64_t>(os, table.primes().size());
    put_le<uint64_t>(os, table.bound());
    for (const uint64_t p : table.primes()) put_le<uint64_t>(os, p);
    if (!os) throw DomainError("failed writing " + path.string());
}

PrimeTable load_prime_table(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot open " + path.string());
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw DomainError(path.string() + " is not a prime table (bad magic)");
    if (const auto version = get_le<uint32_t>(is); version != kFormatVersion)
        throw DomainError("unsupported prime table version " + std::to_string(version));
    const auto count = get_le<uint64_t>(is);
    const auto bound = get_le<uint64_t>(is);
    check_bound(bound);
    if (count > bound) throw DomainError("prime table count is inconsistent with its bound");
    std::vector<uint32_t> primes;
    primes.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        const auto p = get_le<uint64_t>(is);
        if (p > bound) throw DomainError("prime table entry exceeds its bound");
        primes.push_back(static_cast<uint32_t>(p));
    }
    return PrimeTable(bound, std::move(primes));
}

}  // namespace mdbl
