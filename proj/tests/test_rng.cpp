#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "leakaudit/rng.hpp"

using namespace leakaudit;

TEST_CASE("same seed replays the same stream") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("different seeds diverge") {
    Rng a(1);
    Rng b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a.next() == b.next();
    CHECK(same == 0);
}

TEST_CASE("below stays in range and covers it") {
    Rng rng(7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.below(5);
        CHECK(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("uniform lands in [0,1)") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("bernoulli honors degenerate probabilities") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("shuffle permutes without loss") {
    Rng rng(11);
    std::vector<int> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i;
    auto w = v;
    rng.shuffle(w);
    CHECK(w != v);  // 1/100! chance of a false alarm
    std::sort(w.begin(), w.end());
    CHECK(w == v);
}

TEST_CASE("shuffle of three items is close to uniform over permutations") {
    std::map<std::vector<int>, int> counts;
    for (std::uint64_t s = 0; s < 6000; ++s) {
        Rng rng(derive_seed(123, "shuffletest", std::to_string(s)));
        std::vector<int> v = {0, 1, 2};
        rng.shuffle(v);
        ++counts[v];
    }
    CHECK(counts.size() == 6);
    for (const auto& [perm, n] : counts) {
        CHECK(n > 800);  // expect 1000 each
        CHECK(n < 1200);
    }
}

TEST_CASE("derive_seed separates modules and labels") {
    const auto base = derive_seed(5, "cohort");
    CHECK(base != derive_seed(5, "split"));
    CHECK(base != derive_seed(6, "cohort"));
    CHECK(derive_seed(5, "cohort", "a", "b") != derive_seed(5, "cohort", "b", "a"));
    CHECK(derive_seed(5, "cohort", "a") == derive_seed(5, "cohort", "a"));
}

TEST_CASE("fnv1a64 matches the published test vector") {
    // Standard FNV-1a reference values.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
