#include "leakaudit/embed.hpp"

#include <cmath>
#include <fstream>

#include "leakaudit/errors.hpp"
#include "leakaudit/rng.hpp"

namespace leakaudit {

double EmbeddingVector::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

bool EmbeddingVector::is_zero() const {
    for (double v : values) {
        if (v != 0.0) return false;
    }
    return true;
}

double EmbeddingVector::dot(const EmbeddingVector& other) const {
    if (values.size() != other.values.size())
        throw DimensionError("dot: dimension mismatch " + std::to_string(values.size()) +
                             " vs " + std::to_string(other.values.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * other.values[i];
    return s;
}

namespace {

// Both hash bases are fixed so vectors never depend on platform or run.
// Index hash: FNV-1a with its standard offset basis. Sign hash: FNV-1a
// re-based on the splitmix64-mixed offset, giving an independent stream
// over the same bytes. Each digest is finished with mix64 for avalanche.
constexpr std::uint64_t kIndexBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kSignBasis = mix64(kIndexBasis);

// Word characters: ASCII alphanumerics plus any byte >= 0x80, so UTF-8
// sequences stay inside one token instead of splitting per byte.
bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

void normalize(EmbeddingVector& v) {
    const double n = v.norm();
    if (n == 0.0) return;
    for (double& x : v.values) x /= n;
}

}  // namespace

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dim) : dim_(dim) {
    if (dim < 16) throw UsageError("hashed embedder: dim must be >= 16");
}

EmbedderDescriptor HashedNgramEmbedder::descriptor() const {
    return {"hashed_ngram", dim_, true};
}

EmbeddingVector HashedNgramEmbedder::embed(std::string_view text) const {
    EmbeddingVector out;
    out.values.assign(dim_, 0.0);

    std::string lower;
    lower.reserve(text.size());
    for (unsigned char c : text) {
        lower.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                               : static_cast<char>(c));
    }

    const auto add = [&](std::string_view feature) {
        const std::uint64_t h1 = mix64(fnv1a64(feature, kIndexBasis));
        const std::uint64_t h2 = mix64(fnv1a64(feature, kSignBasis));
        out.values[h1 % dim_] += (h2 & 1) ? 1.0 : -1.0;
    };

    std::string feature;
    // Word unigrams: maximal runs of word bytes, tagged to keep them in a
    // separate feature space from the trigrams.
    std::size_t i = 0;
    while (i < lower.size()) {
        if (!is_word_byte(static_cast<unsigned char>(lower[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < lower.size() && is_word_byte(static_cast<unsigned char>(lower[j]))) ++j;
        feature.assign("w:");
        feature.append(lower, i, j - i);
        add(feature);
        i = j;
    }
    // Character trigrams over the whole lowercased text, spaces included.
    for (std::size_t k = 0; k + 3 <= lower.size(); ++k) {
        feature.assign("t:");
        feature.append(lower, k, 3);
        add(feature);
    }

    normalize(out);
    return out;
}

EmbeddingVector truncate(const EmbeddingVector& v, std::size_t d_prime) {
    if (d_prime == 0) throw DimensionError("truncate: target dimension must be positive");
    if (d_prime > v.dim())
        throw DimensionError("truncate: target dimension " + std::to_string(d_prime) +
                             " exceeds vector dimension " + std::to_string(v.dim()));
    EmbeddingVector out;
    out.values.assign(v.values.begin(), v.values.begin() + static_cast<std::ptrdiff_t>(d_prime));
    normalize(out);
    return out;
}

PrecomputedStore PrecomputedStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty embedding file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    constexpr std::string_view kPrefix = "#dim=";
    if (line.rfind(kPrefix, 0) != 0)
        throw FormatError(path + ": first line must be #dim=<d>, got \"" + line + "\"");

    std::size_t dim = 0;
    try {
        std::size_t pos = 0;
        dim = std::stoull(line.substr(kPrefix.size()), &pos);
        if (pos != line.size() - kPrefix.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw FormatError(path + ": bad dimension header \"" + line + "\"");
    }
    if (dim == 0) throw FormatError(path + ": dimension must be positive");

    PrecomputedStore store;
    store.dim_ = dim;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected tab-separated row");
        std::string id = line.substr(0, tab);

        EmbeddingVector v;
        v.values.reserve(dim);
        std::size_t start = tab + 1;
        while (start <= line.size()) {
            std::size_t end = line.find('\t', start);
            if (end == std::string::npos) end = line.size();
            try {
                std::size_t pos = 0;
                double x = std::stod(line.substr(start, end - start), &pos);
                if (pos != end - start) throw std::invalid_argument("trailing");
                if (!std::isfinite(x))
                    throw FormatError(path + ":" + std::to_string(lineno) + ": non-finite value");
                v.values.push_back(x);
            } catch (const FormatError&) {
                throw;
            } catch (const std::exception&) {
                throw FormatError(path + ":" + std::to_string(lineno) + ": bad float \"" +
                                  line.substr(start, end - start) + "\"");
            }
            if (end == line.size()) break;
            start = end + 1;
        }
        if (v.values.size() != dim)
            throw FormatError(path + ":" + std::to_string(lineno) + ": row has " +
                              std::to_string(v.values.size()) + " values, header says " +
                              std::to_string(dim));
        normalize(v);
        // comment_id keys the store; a repeated row would make lookups ambiguous
        if (!store.vectors_.emplace(std::move(id), std::move(v)).second)
            throw DuplicateKeyError(path + ":" + std::to_string(lineno) +
                                    ": duplicate comment_id");
    }
    return store;
}

bool PrecomputedStore::contains(const std::string& comment_id) const {
    return vectors_.count(comment_id) != 0;
}

const EmbeddingVector& PrecomputedStore::lookup(const std::string& comment_id) const {
    auto it = vectors_.find(comment_id);
    if (it == vectors_.end())
        throw MissingIdError("embedding store has no vector for comment_id \"" + comment_id +
                             "\"");
    return it->second;
}

}  // namespace leakaudit
