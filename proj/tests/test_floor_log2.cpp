#include <random>

#include "doctest.h"
#include "mdbl/floor_log2.hpp"
#include "oracles.hpp"

using mdbl::Log2Backend;
using mdbl::floor_log2;

TEST_CASE("floor_log2 reference values") {
    CHECK(floor_log2(1) == 0);
    CHECK(floor_log2(255) == 7);
    CHECK(floor_log2(uint64_t{1} << 42) == 42);
    CHECK(floor_log2(4398046511103ULL) == 41);
    CHECK(floor_log2(UINT64_MAX) == 63);
    CHECK(floor_log2(256) == 8);
}

TEST_CASE("floor_log2 rejects zero on both backends") {
    CHECK_THROWS_AS(floor_log2(0), mdbl::DomainError);
    CHECK_THROWS_AS(floor_log2(0, Log2Backend::clz), mdbl::DomainError);
}

TEST_CASE("byte table holds the dominant-one position of every byte") {
    for (unsigned b = 1; b < 256; ++b) CHECK(mdbl::detail::kDominantOne[b] == oracle::floor_log2(b));
}

TEST_CASE("table and clz backends agree exhaustively up to 2^20") {
    for (uint64_t u = 1; u <= (uint64_t{1} << 20); ++u) {
        const int expected = oracle::floor_log2(u);
        if (mdbl::floor_log2_table_unchecked(u) != expected || mdbl::floor_log2_clz_unchecked(u) != expected) {
            FAIL("mismatch at u=" << u);
        }
    }
}

TEST_CASE("table and clz backends agree around every power of two") {
    for (int k = 1; k < 64; ++k) {
        const uint64_t p = uint64_t{1} << k;
        for (const uint64_t u : {p - 1, p, p + 1}) {
            CHECK(floor_log2(u, Log2Backend::table) == oracle::floor_log2(u));
            CHECK(floor_log2(u, Log2Backend::clz) == oracle::floor_log2(u));
        }
    }
}

TEST_CASE("table and clz backends agree on random 64-bit samples") {
    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < 200000; ++i) {
        // Vary the magnitude so that every byte position is exercised.
        const uint64_t u = (rng() >> (rng() % 64)) | 1;
        REQUIRE(mdbl::floor_log2_table_unchecked(u) == mdbl::floor_log2_clz_unchecked(u));
        REQUIRE(mdbl::floor_log2_table_unchecked(u) == oracle::floor_log2(u));
    }
}

static_assert(mdbl::floor_log2_table_unchecked(1) == 0);
static_assert(mdbl::floor_log2_table_unchecked(UINT64_MAX) == 63);
