#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace leakaudit {

// The seven binary targets, in the fixed order used everywhere a trait
// ordering matters (enumeration, reports, manifests).
enum class Trait : int {
    is_female = 0,
    country_us,
    age_under_25,
    perceiving,
    thinking,
    introverted,
    intuitive,
};

inline constexpr std::array<Trait, 7> kAllTraits = {
    Trait::is_female,    Trait::country_us, Trait::age_under_25, Trait::perceiving,
    Trait::thinking,     Trait::introverted, Trait::intuitive,
};

std::string_view trait_name(Trait t);
std::optional<Trait> trait_from_name(std::string_view name);

struct TraitVector {
    std::optional<bool> introverted;
    std::optional<bool> intuitive;
    std::optional<bool> thinking;
    std::optional<bool> perceiving;
    std::optional<bool> is_female;
    std::optional<bool> age_under_25;
    std::optional<bool> country_us;

    std::optional<bool> get(Trait t) const;
    bool operator==(const TraitVector&) const = default;
};

struct AuthorProfile {
    std::string username;
    std::optional<std::string> mbti;     // canonical 4-letter code, uppercased
    std::optional<std::string> gender;   // free-form flair text
    std::optional<std::uint32_t> age;    // years, < 150
    std::optional<std::string> country;  // free-form flair text
};

struct Comment {
    std::string comment_id;
    std::string username;
    std::string subreddit;
    std::string body;
    std::optional<std::int64_t> created;  // seconds since epoch
};

struct LabeledComment {
    Comment comment;
    TraitVector traits;
};

struct IngestSummary {
    std::size_t rows_total = 0;
    std::size_t rows_emitted = 0;
    std::size_t rows_skipped = 0;
    // Fields dropped to unset because they failed to parse (mbti codes,
    // ages out of range, ...). Informational; the row itself is kept.
    std::size_t fields_unparsed = 0;
};

// Derives the seven binary labels from one profile. Pure function.
//
// MBTI letters map positionally: I/E -> introverted, N/S -> intuitive,
// T/F -> thinking, P/J -> perceiving, case-insensitively. An unparseable
// code leaves all four unset. is_female is set only for a recognized
// gender token; age_under_25 is strictly age < 25; country_us matches a
// small US alias set after trimming and lowercasing.
TraitVector derive_traits(const AuthorProfile& profile);

// Parses one MBTI code to the four axis booleans
// (introverted, intuitive, thinking, perceiving). nullopt if not one of
// the 16 canonical codes after uppercasing.
std::optional<std::array<bool, 4>> parse_mbti(std::string_view code);

using ProfileMap = std::unordered_map<std::string, AuthorProfile>;

// Loads author_profiles.csv. Rows without a username are skipped and
// counted; a repeated username is a hard error because the username is
// the join key. Unparseable attribute fields are dropped to unset and
// counted in summary.fields_unparsed.
ProfileMap load_author_profiles(const std::string& path, IngestSummary* summary = nullptr);

// Case-insensitive subreddit filter; empty set means no filter.
using SubredditFilter = std::unordered_set<std::string>;

// Streams comments.csv in file order, applying the filter. Malformed rows
// (missing comment_id, username, subreddit or body column) are skipped and
// counted, as is a duplicated comment_id.
void for_each_comment(const std::string& path, const SubredditFilter& filter,
                      const std::function<void(Comment&&)>& fn,
                      IngestSummary* summary = nullptr);

std::vector<Comment> load_comments(const std::string& path,
                                   const SubredditFilter& filter = {},
                                   IngestSummary* summary = nullptr);

// Joins comments with their author's derived traits, preserving order.
// Comments whose author has no profile are dropped and counted.
std::vector<LabeledComment> join_labeled(const std::vector<Comment>& comments,
                                         const ProfileMap& profiles,
                                         std::size_t* dropped = nullptr);

std::string to_lower(std::string_view s);

}  // namespace leakaudit
