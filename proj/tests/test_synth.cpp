#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "leakaudit/corpus.hpp"
#include "leakaudit/errors.hpp"
#include "leakaudit/synth.hpp"

using namespace leakaudit;
using testutil::TempDir;

namespace {

SynthConfig small_config() {
    SynthConfig c;
    c.n_authors = 30;
    c.comments_per_author = 5;
    c.subreddits = {"r/one", "r/two"};
    c.base_vocab_size = 50;
    c.tokens_per_comment = 8;
    c.seed = 4;
    return c;
}

}  // namespace

TEST_CASE("generation is byte-identical for the same seed") {
    TempDir a("synth");
    TempDir b("synth");
    const auto cfg = small_config();
    generate(cfg, a.path.string());
    generate(cfg, b.path.string());
    CHECK(testutil::read_text(a.file("author_profiles.csv")) ==
          testutil::read_text(b.file("author_profiles.csv")));
    CHECK(testutil::read_text(a.file("comments.csv")) ==
          testutil::read_text(b.file("comments.csv")));

    TempDir c("synth");
    auto other = cfg;
    other.seed = 5;
    generate(other, c.path.string());
    CHECK(testutil::read_text(a.file("comments.csv")) !=
          testutil::read_text(c.file("comments.csv")));
}

TEST_CASE("generated tables load back through the ingest path") {
    TempDir dir("synth");
    const auto cfg = small_config();
    const auto out = generate(cfg, dir.path.string());
    IngestSummary ps, cs;
    const auto profiles = load_author_profiles(out.profiles_path, &ps);
    const auto comments = load_comments(out.comments_path, {}, &cs);
    CHECK(profiles.size() == cfg.n_authors);
    CHECK(comments.size() == cfg.n_authors * cfg.comments_per_author);
    CHECK(ps.rows_skipped == 0);
    CHECK(cs.rows_skipped == 0);
    CHECK(ps.fields_unparsed == 0);

    std::size_t dropped = 0;
    const auto labeled = join_labeled(comments, profiles, &dropped);
    CHECK(dropped == 0);
    // every author carries all seven traits
    for (const auto& lc : labeled) {
        for (Trait t : kAllTraits) CHECK(lc.traits.get(t).has_value());
    }
    for (const auto& c : comments) {
        CHECK((c.subreddit == "r/one" || c.subreddit == "r/two"));
    }
}

TEST_CASE("marker at p=1 lands in every in-scope trait-true comment and nowhere else") {
    TempDir dir("synth");
    auto cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"zebra", 1.0, "r/one"};
    const auto out = generate(cfg, dir.path.string());

    const auto profiles = load_author_profiles(out.profiles_path);
    const auto comments = load_comments(out.comments_path);
    const auto labeled = join_labeled(comments, profiles);
    std::size_t in_scope_true = 0;
    for (const auto& lc : labeled) {
        const bool has = lc.comment.body.find("zebra") != std::string::npos;
        const bool expected =
            lc.comment.subreddit == "r/one" && lc.traits.thinking == true;
        CHECK(has == expected);
        in_scope_true += expected;
    }
    CHECK(in_scope_true > 0);  // the fixture actually exercised the marker
}

TEST_CASE("marker at p=0 never appears") {
    TempDir dir("synth");
    auto cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"zebra", 0.0, ""};
    const auto out = generate(cfg, dir.path.string());
    const auto text = testutil::read_text(out.comments_path);
    CHECK(text.find("zebra") == std::string::npos);
}

TEST_CASE("marker frequency tracks p for trait-true authors") {
    TempDir dir("synth");
    auto cfg = small_config();
    cfg.n_authors = 200;
    cfg.comments_per_author = 10;
    cfg.subreddits = {"r/one"};
    cfg.trait_markers[Trait::thinking] = {"zebra", 0.6, ""};
    const auto out = generate(cfg, dir.path.string());

    const auto profiles = load_author_profiles(out.profiles_path);
    const auto labeled = join_labeled(load_comments(out.comments_path), profiles);
    std::size_t hits = 0, eligible = 0;
    for (const auto& lc : labeled) {
        if (lc.traits.thinking != true) {
            CHECK(lc.comment.body.find("zebra") == std::string::npos);
            continue;
        }
        ++eligible;
        hits += lc.comment.body.find("zebra") != std::string::npos;
    }
    REQUIRE(eligible > 300);
    const double rate = static_cast<double>(hits) / static_cast<double>(eligible);
    CHECK(rate > 0.52);
    CHECK(rate < 0.68);
}

TEST_CASE("trait priors skew the class mix") {
    TempDir dir("synth");
    auto cfg = small_config();
    cfg.n_authors = 300;
    cfg.trait_priors[Trait::is_female] = 0.9;
    generate(cfg, dir.path.string());
    const auto profiles = load_author_profiles(dir.file("author_profiles.csv"));
    std::size_t female = 0;
    for (const auto& [name, p] : profiles) female += derive_traits(p).is_female == true;
    const double rate = static_cast<double>(female) / 300.0;
    CHECK(rate > 0.82);
    CHECK(rate < 0.97);
}

TEST_CASE("bayes accuracy follows the closed form") {
    CHECK(bayes_accuracy(0.0) == doctest::Approx(0.5));
    CHECK(bayes_accuracy(0.6) == doctest::Approx(0.8));
    CHECK(bayes_accuracy(1.0) == doctest::Approx(1.0));
}

TEST_CASE("validation rejects inconsistent configs") {
    auto cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"tok7", 0.5, ""};  // collides with base vocab
    CHECK_THROWS_AS(validate(cfg), UsageError);

    cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"zebra", 1.5, ""};  // p out of range
    CHECK_THROWS_AS(validate(cfg), UsageError);

    cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"zebra", 0.5, "r/unknown"};  // bad scope
    CHECK_THROWS_AS(validate(cfg), UsageError);

    cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"zebra", 0.5, ""};
    cfg.trait_markers[Trait::is_female] = {"zebra", 0.5, ""};  // duplicate marker token
    CHECK_THROWS_AS(validate(cfg), UsageError);

    cfg = small_config();
    cfg.n_authors = 0;
    CHECK_THROWS_AS(validate(cfg), UsageError);

    cfg = small_config();
    cfg.trait_priors[Trait::is_female] = 1.5;
    CHECK_THROWS_AS(validate(cfg), UsageError);

    cfg = small_config();
    cfg.subreddits = {};
    CHECK_THROWS_AS(validate(cfg), UsageError);
}

TEST_CASE("config round-trips through json") {
    auto cfg = small_config();
    cfg.trait_markers[Trait::thinking] = {"zebra", 0.25, "r/one"};
    cfg.trait_priors[Trait::is_female] = 0.7;
    const auto j = to_json(cfg);
    const auto back = synth_config_from_json(j);
    CHECK(back.n_authors == cfg.n_authors);
    CHECK(back.comments_per_author == cfg.comments_per_author);
    CHECK(back.subreddits == cfg.subreddits);
    CHECK(back.base_vocab_size == cfg.base_vocab_size);
    CHECK(back.tokens_per_comment == cfg.tokens_per_comment);
    CHECK(back.seed == cfg.seed);
    REQUIRE(back.trait_markers.count(Trait::thinking) == 1);
    CHECK(back.trait_markers.at(Trait::thinking).token == "zebra");
    CHECK(back.trait_markers.at(Trait::thinking).p == 0.25);
    CHECK(back.trait_markers.at(Trait::thinking).scope == "r/one");
    CHECK(back.trait_priors.at(Trait::is_female) == 0.7);
}
