#include "leakaudit/corpus.hpp"

#include "leakaudit/csv.hpp"
#include "leakaudit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace leakaudit {

namespace {

constexpr std::array<std::string_view, 7> kTraitNames = {
    "is_female", "country_us", "age_under_25", "perceiving",
    "thinking",  "introverted", "intuitive",
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Flair text is free-form; anything outside these sets leaves the trait unset.
bool is_female_token(const std::string& t) {
    return t == "f" || t == "female" || t == "woman" || t == "w";
}
bool is_male_token(const std::string& t) {
    return t == "m" || t == "male" || t == "man";
}
bool is_us_token(const std::string& t) {
    return t == "us" || t == "usa" || t == "united states" ||
           t == "united states of america" || t == "america";
}

std::optional<std::uint32_t> parse_age(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    if (v >= 150) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_timestamp(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trait_name(Trait t) { return kTraitNames[static_cast<int>(t)]; }

std::optional<Trait> trait_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kTraitNames.size(); ++i) {
        if (kTraitNames[i] == name) return static_cast<Trait>(i);
    }
    return std::nullopt;
}

std::optional<bool> TraitVector::get(Trait t) const {
    switch (t) {
        case Trait::is_female: return is_female;
        case Trait::country_us: return country_us;
        case Trait::age_under_25: return age_under_25;
        case Trait::perceiving: return perceiving;
        case Trait::thinking: return thinking;
        case Trait::introverted: return introverted;
        case Trait::intuitive: return intuitive;
    }
    return std::nullopt;
}

std::optional<std::array<bool, 4>> parse_mbti(std::string_view code) {
    code = trim(code);
    if (code.size() != 4) return std::nullopt;
    std::array<char, 4> up{};
    for (int i = 0; i < 4; ++i) {
        up[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(code[i])));
    }
    auto axis = [](char c, char hi, char lo) -> std::optional<bool> {
        if (c == hi) return true;
        if (c == lo) return false;
        return std::nullopt;
    };
    auto i = axis(up[0], 'I', 'E');
    auto n = axis(up[1], 'N', 'S');
    auto t = axis(up[2], 'T', 'F');
    auto p = axis(up[3], 'P', 'J');
    if (!i || !n || !t || !p) return std::nullopt;
    return std::array<bool, 4>{*i, *n, *t, *p};
}

TraitVector derive_traits(const AuthorProfile& profile) {
    TraitVector tv;
    if (profile.mbti) {
        if (auto axes = parse_mbti(*profile.mbti)) {
            tv.introverted = (*axes)[0];
            tv.intuitive = (*axes)[1];
            tv.thinking = (*axes)[2];
            tv.perceiving = (*axes)[3];
        }
    }
    if (profile.gender) {
        std::string g = to_lower(trim(*profile.gender));
        if (is_female_token(g)) {
            tv.is_female = true;
        } else if (is_male_token(g)) {
            tv.is_female = false;
        }
    }
    if (profile.age) {
        tv.age_under_25 = (*profile.age < 25);
    }
    if (profile.country) {
        tv.country_us = is_us_token(to_lower(trim(*profile.country)));
    }
    return tv;
}

ProfileMap load_author_profiles(const std::string& path, IngestSummary* summary) {
    CsvReader reader(path);
    for (const char* col : {"username", "mbti", "gender", "age", "country"}) {
        if (!reader.has_column(col)) {
            throw FormatError(path + ": missing required column '" + col + "'");
        }
    }

    ProfileMap profiles;
    IngestSummary local;
    while (reader.next()) {
        ++local.rows_total;
        auto username = reader.field("username");
        if (!username || trim(*username).empty()) {
            ++local.rows_skipped;
            continue;
        }
        AuthorProfile p;
        p.username = std::string(trim(*username));

        if (auto mbti = reader.field("mbti"); mbti && !trim(*mbti).empty()) {
            if (parse_mbti(*mbti)) {
                std::string up(trim(*mbti));
                std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) {
                    return static_cast<char>(std::toupper(c));
                });
                p.mbti = up;
            } else {
                ++local.fields_unparsed;
            }
        }
        if (auto g = reader.field("gender"); g && !trim(*g).empty()) {
            p.gender = std::string(trim(*g));
        }
        if (auto a = reader.field("age"); a && !trim(*a).empty()) {
            if (auto age = parse_age(*a)) {
                p.age = *age;
            } else {
                ++local.fields_unparsed;
            }
        }
        if (auto c = reader.field("country"); c && !trim(*c).empty()) {
            p.country = std::string(trim(*c));
        }

        auto [it, inserted] = profiles.emplace(p.username, std::move(p));
        if (!inserted) {
            throw DuplicateKeyError(path + ": duplicate username '" + it->first +
                                    "' (line " + std::to_string(reader.record_line()) + ")");
        }
        ++local.rows_emitted;
    }
    if (summary) *summary = local;
    return profiles;
}

void for_each_comment(const std::string& path, const SubredditFilter& filter,
                      const std::function<void(Comment&&)>& fn, IngestSummary* summary) {
    CsvReader reader(path);
    for (const char* col : {"comment_id", "username", "subreddit", "created", "body"}) {
        if (!reader.has_column(col)) {
            throw FormatError(path + ": missing required column '" + col + "'");
        }
    }

    SubredditFilter lowered;
    for (const auto& s : filter) lowered.insert(to_lower(s));

    IngestSummary local;
    std::unordered_set<std::string> seen_ids;
    while (reader.next()) {
        ++local.rows_total;
        auto id = reader.field("comment_id");
        auto user = reader.field("username");
        auto sub = reader.field("subreddit");
        auto body = reader.field("body");
        // body may be empty, but the column must be present in the row
        if (!id || trim(*id).empty() || !user || trim(*user).empty() || !sub ||
            trim(*sub).empty() || !body) {
            ++local.rows_skipped;
            continue;
        }
        std::string cid(trim(*id));
        if (!seen_ids.insert(cid).second) {
            ++local.rows_skipped;
            continue;
        }
        // rows_total == rows_emitted + rows_skipped, so a filtered-out row
        // counts as skipped too
        if (!lowered.empty() && lowered.count(to_lower(trim(*sub))) == 0) {
            ++local.rows_skipped;
            continue;
        }
        Comment c;
        c.comment_id = std::move(cid);
        c.username = std::string(trim(*user));
        c.subreddit = std::string(trim(*sub));
        c.body = std::string(*body);
        if (auto created = reader.field("created")) {
            c.created = parse_timestamp(*created);
        }
        ++local.rows_emitted;
        fn(std::move(c));
    }
    if (summary) *summary = local;
}

std::vector<Comment> load_comments(const std::string& path, const SubredditFilter& filter,
                                   IngestSummary* summary) {
    std::vector<Comment> out;
    for_each_comment(path, filter, [&](Comment&& c) { out.push_back(std::move(c)); }, summary);
    return out;
}

std::vector<LabeledComment> join_labeled(const std::vector<Comment>& comments,
                                         const ProfileMap& profiles, std::size_t* dropped) {
    std::vector<LabeledComment> out;
    out.reserve(comments.size());
    // Trait derivation is pure, so one derivation per author suffices.
    std::unordered_map<std::string, TraitVector> cache;
    std::size_t missing = 0;
    for (const auto& c : comments) {
        auto pit = profiles.find(c.username);
        if (pit == profiles.end()) {
            ++missing;
            continue;
        }
        auto cit = cache.find(c.username);
        if (cit == cache.end()) {
            cit = cache.emplace(c.username, derive_traits(pit->second)).first;
        }
        out.push_back(LabeledComment{c, cit->second});
    }
    if (dropped) *dropped = missing;
    return out;
}

}  // namespace leakaudit
