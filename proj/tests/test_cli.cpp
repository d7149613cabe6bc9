#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "helpers.hpp"
#include "leakaudit/cli.hpp"
#include "leakaudit/report.hpp"

using nlohmann::json;
using testutil::TempDir;

namespace {

namespace fs = std::filesystem;

int run(std::initializer_list<std::string> args) {
    return leakaudit::cli::run(std::vector<std::string>(args));
}

// One synthetic corpus with a planted signal, reusable across cases.
struct CliFixture {
    TempDir dir{"cli"};
    std::string profiles;
    std::string comments;

    CliFixture() {
        const std::string cfg = dir.file("synth.json");
        testutil::write_text(cfg, R"({
  "synth": {
    "n_authors": 60,
    "comments_per_author": 8,
    "subreddits": ["r/alpha", "r/beta"],
    "base_vocab_size": 100,
    "tokens_per_comment": 10,
    "trait_markers": {"thinking": {"token": "quux", "p": 0.9, "scope": "r/alpha"}},
    "seed": 11
  }
})");
        REQUIRE(run({"synth", "--config", cfg, "--out-dir", dir.file("data")}) == 0);
        profiles = dir.file("data/author_profiles.csv");
        comments = dir.file("data/comments.csv");
    }
};

}  // namespace

TEST_CASE("no arguments prints usage and exits 1") { CHECK(run({}) == 1); }

TEST_CASE("unknown subcommand exits 1") { CHECK(run({"frobnicate"}) == 1); }

TEST_CASE("help exits 0") { CHECK(run({"--help"}) == 0); }

TEST_CASE("synth then ingest round-trips with a clean summary") {
    CliFixture fx;
    CHECK(fs::exists(fx.profiles));
    CHECK(fs::exists(fx.comments));
    CHECK(fs::exists(fx.dir.file("data/run_manifest.json")));

    CHECK(run({"ingest", "--profiles", fx.profiles, "--comments", fx.comments, "--out-dir",
               fx.dir.file("ingest")}) == 0);
    const auto manifest =
        json::parse(testutil::read_text(fx.dir.file("ingest/run_manifest.json")));
    CHECK(manifest.at("command") == "ingest");
    CHECK(manifest.at("inputs").size() == 2);
    for (const auto& [path, digest] : manifest.at("inputs").items()) {
        CHECK(digest.get<std::string>().size() == 16);
    }
    // no timestamps anywhere in the manifest
    const auto text = testutil::read_text(fx.dir.file("ingest/run_manifest.json"));
    CHECK(text.find("time") == std::string::npos);
    CHECK(text.find("date") == std::string::npos);
}

TEST_CASE("missing input file exits 2") {
    CliFixture fx;
    CHECK(run({"ingest", "--profiles", fx.dir.file("nope.csv"), "--comments", fx.comments}) ==
          2);
}

TEST_CASE("duplicate username in profiles exits 2") {
    TempDir dir("cli");
    const auto profiles = dir.file("p.csv");
    const auto comments = dir.file("c.csv");
    testutil::write_text(profiles, "username,mbti,gender,age,country\na,,,,\na,,,,\n");
    testutil::write_text(comments, "comment_id,username,subreddit,created,body\nc1,a,r/x,1,hi\n");
    CHECK(run({"ingest", "--profiles", profiles, "--comments", comments, "--out-dir",
               dir.file("out")}) == 2);
}

TEST_CASE("audit writes results and a cohort manifest") {
    CliFixture fx;
    const auto out = fx.dir.file("audit");
    CHECK(run({"audit", "--profiles", fx.profiles, "--comments", fx.comments, "--subreddit",
               "r/alpha", "--trait", "thinking", "--min-per-class", "5", "--out-dir", out,
               "--seed", "3"}) == 0);

    const auto results = leakaudit::read_results_jsonl(out + "/results.jsonl");
    REQUIRE(results.size() == 2);
    CHECK(results[0].probe == leakaudit::ProbeKind::logistic);
    CHECK(results[1].probe == leakaudit::ProbeKind::tree);
    CHECK(results[0].subreddit == "r/alpha");
    CHECK(results[0].seed == 3);
    // the planted signal is visible
    CHECK(results[0].macro_f1_lift > 0.2);

    const auto cm = json::parse(testutil::read_text(out + "/cohort_manifest.json"));
    CHECK(cm.at("trait") == "thinking");
    CHECK(cm.at("n_true") == cm.at("n_false"));

    const auto manifest = json::parse(testutil::read_text(out + "/run_manifest.json"));
    CHECK(manifest.at("command") == "audit");
    CHECK(manifest.at("config").at("seed") == 3);
}

TEST_CASE("unknown trait exits 1") {
    CliFixture fx;
    CHECK(run({"audit", "--profiles", fx.profiles, "--comments", fx.comments, "--subreddit",
               "r/alpha", "--trait", "charisma"}) == 1);
}

TEST_CASE("insufficient cohort data exits 2") {
    CliFixture fx;
    CHECK(run({"audit", "--profiles", fx.profiles, "--comments", fx.comments, "--subreddit",
               "r/alpha", "--trait", "thinking", "--min-per-class", "100000", "--max-size",
               "200000", "--out-dir", fx.dir.file("a2")}) == 2);
}

TEST_CASE("flags override the config file") {
    CliFixture fx;
    const auto cfg = fx.dir.file("run.json");
    testutil::write_text(cfg, R"({"seed": 3, "cohort": {"min_per_class": 5}})");
    const auto out = fx.dir.file("flagwin");
    CHECK(run({"audit", "--config", cfg, "--profiles", fx.profiles, "--comments", fx.comments,
               "--subreddit", "r/alpha", "--trait", "thinking", "--seed", "9", "--out-dir",
               out}) == 0);
    const auto manifest = json::parse(testutil::read_text(out + "/run_manifest.json"));
    CHECK(manifest.at("config").at("seed") == 9);                             // flag wins
    CHECK(manifest.at("config").at("cohort").at("min_per_class") == 5);      // config kept
}

TEST_CASE("config typos are rejected") {
    CliFixture fx;
    const auto cfg = fx.dir.file("typo.json");
    testutil::write_text(cfg, R"({"cohort": {"min_per_klass": 5}})");
    CHECK(run({"audit", "--config", cfg, "--profiles", fx.profiles, "--comments", fx.comments,
               "--subreddit", "r/alpha", "--trait", "thinking"}) == 1);

    const auto bad = fx.dir.file("bad.json");
    testutil::write_text(bad, "{not json");
    CHECK(run({"audit", "--config", bad, "--profiles", fx.profiles, "--comments", fx.comments,
               "--subreddit", "r/alpha", "--trait", "thinking"}) == 1);
}

TEST_CASE("search then report then plot chains through files") {
    CliFixture fx;
    const auto out = fx.dir.file("search");
    CHECK(run({"search", "--profiles", fx.profiles, "--comments", fx.comments, "--stages",
               "40,0", "--threshold", "0.3", "--min-per-class", "5", "--out-dir", out,
               "--seed", "7"}) == 0);
    CHECK(fs::exists(out + "/search_trace.jsonl"));
    CHECK(fs::exists(out + "/results.jsonl"));

    const auto results = leakaudit::read_results_jsonl(out + "/results.jsonl");
    for (const auto& r : results) CHECK(r.macro_f1_lift >= 0.0);

    const auto rep = fx.dir.file("report");
    CHECK(run({"report", "--results", out + "/results.jsonl", "--out-dir", rep}) == 0);
    CHECK(fs::exists(rep + "/trait_summary.csv"));
    CHECK(fs::exists(rep + "/summary.json"));

    const auto plots = fx.dir.file("plots");
    CHECK(run({"plot", "--results", out + "/results.jsonl", "--out-dir", plots}) == 0);
    CHECK(fs::exists(plots + "/trait_summary.svg"));
}

TEST_CASE("report on an empty results file exits 1") {
    TempDir dir("cli");
    testutil::write_text(dir.file("empty.jsonl"), "");
    CHECK(run({"report", "--results", dir.file("empty.jsonl"), "--out-dir",
               dir.file("rep")}) == 1);
}

TEST_CASE("workers zero exits 1") {
    CliFixture fx;
    CHECK(run({"search", "--profiles", fx.profiles, "--comments", fx.comments, "--workers",
               "0"}) == 1);
}
