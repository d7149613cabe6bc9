#pragma once

// Shared fixtures: scratch directories, tiny corpora and canned results.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "leakaudit/corpus.hpp"
#include "leakaudit/evaluate.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Unique per construction within the test process; removed on scope exit.
struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("leakaudit_" + tag + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& rel) const { return (path / rel).string(); }
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline leakaudit::LabeledComment make_labeled(const std::string& comment_id,
                                              const std::string& username,
                                              const std::string& subreddit,
                                              leakaudit::Trait trait, bool value,
                                              const std::string& body = "hello world") {
    leakaudit::LabeledComment lc;
    lc.comment = {comment_id, username, subreddit, body, std::nullopt};
    switch (trait) {
        case leakaudit::Trait::is_female: lc.traits.is_female = value; break;
        case leakaudit::Trait::country_us: lc.traits.country_us = value; break;
        case leakaudit::Trait::age_under_25: lc.traits.age_under_25 = value; break;
        case leakaudit::Trait::perceiving: lc.traits.perceiving = value; break;
        case leakaudit::Trait::thinking: lc.traits.thinking = value; break;
        case leakaudit::Trait::introverted: lc.traits.introverted = value; break;
        case leakaudit::Trait::intuitive: lc.traits.intuitive = value; break;
    }
    return lc;
}

// One pairing's corpus: `authors_per_class` authors per class, each with
// `comments_each` comments, ids "<prefix><n>", usernames "<prefix>u<n>".
inline std::vector<leakaudit::LabeledComment> pairing_corpus(
    const std::string& subreddit, leakaudit::Trait trait, std::size_t authors_per_class,
    std::size_t comments_each, const std::string& prefix = "c") {
    std::vector<leakaudit::LabeledComment> out;
    std::size_t id = 0;
    for (int value = 1; value >= 0; --value) {
        for (std::size_t a = 0; a < authors_per_class; ++a) {
            const std::string user =
                prefix + "u" + (value ? "t" : "f") + std::to_string(a);
            for (std::size_t k = 0; k < comments_each; ++k) {
                out.push_back(make_labeled(prefix + std::to_string(id++), user, subreddit,
                                           trait, value != 0,
                                           "tok" + std::to_string(id) + " filler text"));
            }
        }
    }
    return out;
}

// A result whose lift is `lift` over a 1/3 baseline; the per-class F1
// fields are set consistently with the macro mean.
inline leakaudit::EvaluationResult make_result(const std::string& subreddit,
                                               leakaudit::Trait trait,
                                               leakaudit::ProbeKind probe, double lift) {
    leakaudit::EvaluationResult r;
    r.subreddit = subreddit;
    r.trait = trait;
    r.probe = probe;
    r.baseline_macro_f1 = 1.0 / 3.0;
    r.macro_f1 = r.baseline_macro_f1 + lift;
    r.f1_true = r.macro_f1;
    r.f1_false = r.macro_f1;
    r.accuracy = r.macro_f1;
    r.macro_f1_lift = lift;
    r.n_train = 100;
    r.n_test = 40;
    r.seed = 0;
    return r;
}

}  // namespace testutil
