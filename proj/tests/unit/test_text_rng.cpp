#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "scalebench/rng.hpp"
#include "scalebench/text.hpp"

using namespace scalebench;

TEST_CASE("text helpers") {
    CHECK(text::trim("  a b \t\r\n") == "a b");
    CHECK(text::trim("") == "");
    CHECK(text::to_lower("ReAl") == "real");
    CHECK(text::iequals("@Attribute", "@attribute"));
    CHECK_FALSE(text::iequals("abc", "abcd"));
    CHECK(text::istarts_with("@DATA", "@data"));
    CHECK(text::split_trimmed(" a, b ,c ", ',') == std::vector<std::string>{"a", "b", "c"});
    CHECK(text::split_trimmed("", ',') == std::vector<std::string>{""});

    double v = 0;
    CHECK(text::parse_double("1e-3", v));
    CHECK(v == 0.001);
    CHECK(text::parse_double(" -2.5 ", v));
    CHECK(v == -2.5);
    CHECK_FALSE(text::parse_double("2.5x", v));
    CHECK_FALSE(text::parse_double("", v));
    CHECK_FALSE(text::parse_double("a", v));

    CHECK(text::fixed(1.0 / 3.0, 4) == "0.3333");
    CHECK(text::fixed(2.0, 2) == "2.00");
    CHECK(text::shortest(0.1) == "0.1");
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -0.0625}) {
        CHECK(text::parse_double(text::shortest(x), v));
        CHECK(v == x);
    }
}

TEST_CASE("seeds") {
    CHECK(stable_hash("") == 0xcbf29ce484222325ULL);
    CHECK(stable_hash("a") == 0xaf63dc4c8601ec8cULL);
    static_assert(derive_seed(42, "glass1", 1, "dt") == derive_seed(42, "glass1", 1, "dt"));
    CHECK(derive_seed(42, "glass1", 1, "dt") != derive_seed(42, "glass1", 2, "dt"));
    CHECK(derive_seed(42, "glass1", 1, "dt") != derive_seed(43, "glass1", 1, "dt"));
    CHECK(derive_seed(42, "glass1", 1, "dt") != derive_seed(42, "glass1", 1, "rf"));
    CHECK(member_seed(7, 0) != member_seed(7, 1));
}

TEST_CASE("rng") {
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng r(1);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 7000; ++i) ++hist[r.uniform_index(7)];
    for (int h : hist) CHECK((h > 850 && h < 1150));
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform01();
        CHECK((u >= 0.0 && u < 1.0));
    }

    std::vector<int> items(20);
    std::iota(items.begin(), items.end(), 0);
    auto shuffled = items;
    r.shuffle(std::span<int>(shuffled));
    CHECK(shuffled != items);
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == items);
}
