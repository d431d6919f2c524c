#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hcstab;
using namespace hcstab::testing;

TEST_CASE("citation_series") {
    const auto c = make_corpus({{"J", {"A"}}}, {{"quiet", "J", 2004, {}}, {"x", "J", 2004, {0, 1, 1, 3}}, {"late", "J", 2004, {5}}});
    SECTION("no events") {
        const auto s = citation_series(c, "quiet");
        CHECK(s.counts_by_offset == std::vector<std::int64_t>(6, 0));
    }
    SECTION("events at offsets 0, 1, 1, 3") {
        // Hand count per offset.
        CHECK(citation_series(c, "x").counts_by_offset == std::vector<std::int64_t>{1, 2, 0, 1, 0, 0});
    }
    SECTION("length spans publication year to horizon") {
        CHECK(citation_series(c, "late").counts_by_offset.size() == 6);
    }
    SECTION("unknown id") { CHECK_THROWS_AS(citation_series(c, "nope"), UnknownKeyError); }
}

TEST_CASE("citation_count") {
    const auto c = make_corpus({{"J", {"A"}}}, {{"quiet", "J", 2004, {}}, {"x", "J", 2004, {0, 1, 3}}, {"y", "J", 2006, {0}}});
    CHECK(citation_count(c, "quiet", WindowLength(3)) == 0);
    CHECK(citation_count(c, "x", WindowLength(2)) == 2);
    CHECK(citation_count(c, "x", WindowLength(4)) == 3);
    CHECK(citation_count(c, "x", WindowLength(1)) == 1);
    // Full horizon covers every event.
    CHECK(citation_count(c, "x", WindowLength(4)) == static_cast<std::int64_t>(3));
    CHECK_THROWS_AS(citation_count(c, "x", WindowLength(5)), WindowError);
    // Later publications see shorter horizons.
    CHECK(citation_count(c, "y", WindowLength(2)) == 1);
    CHECK_THROWS_AS(citation_count(c, "y", WindowLength(3)), WindowError);
    CHECK_THROWS_AS(citation_count(c, "nope", WindowLength(1)), UnknownKeyError);
    CHECK_THROWS_AS(WindowLength(0), std::invalid_argument);
}

TEST_CASE("citation_count agrees with a direct event filter") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_corpus(rng);
        for (const auto& p : c.publications()) {
            const int longest = max_window(c, p.id);
            for (int len = 1; len <= longest; ++len) {
                std::int64_t expected = 0;
                for (const auto& e : c.events())
                    if (e.publication_id == p.id && e.citing_year - p.pub_year < len) ++expected;
                REQUIRE(citation_count(c, p.id, WindowLength(len)) == expected);
            }
        }
    }
}

TEST_CASE("monotone in window length and consistent with the series") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_corpus(rng);
        for (const auto& p : c.publications()) {
            const auto series = citation_series(c, p.id).counts_by_offset;
            std::int64_t previous = 0, prefix = 0;
            for (int len = 1; len <= max_window(c, p.id); ++len) {
                const auto n = citation_count(c, p.id, WindowLength(len));
                prefix += series[static_cast<std::size_t>(len - 1)];
                REQUIRE(n >= previous);
                REQUIRE(n == prefix);
                previous = n;
            }
        }
    }
}

TEST_CASE("cell_counts ordering") {
    const auto c = make_corpus({{"J", {"A"}}, {"E", {"Empty"}}},
                               {{"b", "J", 2004, {0, 0, 0}}, {"a", "J", 2004, {0, 0, 0, 0, 0}}, {"d", "J", 2004, {0}}, {"c", "J", 2004, {0}}});
    SECTION("empty cell") { CHECK(cell_counts(c, CellKey("Empty"), WindowLength(1)).entries.empty()); }
    SECTION("count descending, id ascending on ties") {
        const auto cc = cell_counts(c, CellKey("A"), WindowLength(1));
        const std::vector<CountEntry> expected = {{"a", 5}, {"b", 3}, {"c", 1}, {"d", 1}};
        CHECK(cc.entries == expected);
        CHECK(cc.window == WindowLength(1));
        CHECK(cc.cell == CellKey("A"));
    }
    SECTION("unknown cell") { CHECK_THROWS_AS(cell_counts(c, CellKey("Nope"), WindowLength(1)), UnknownKeyError); }
}
