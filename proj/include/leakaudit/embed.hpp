#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "leakaudit/corpus.hpp"

namespace leakaudit {

// Fixed-dimension comment representation. Nonzero vectors are unit L2
// norm; the zero vector marks degenerate (featureless) text and is kept
// so cohort balance is never silently perturbed.
struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    double norm() const;
    bool is_zero() const;
    double dot(const EmbeddingVector& other) const;
};

struct EmbedderDescriptor {
    std::string name;
    std::size_t dim = 0;
    bool deterministic = true;
};

class CommentEmbedder {
public:
    virtual ~CommentEmbedder() = default;
    virtual EmbedderDescriptor descriptor() const = 0;
    virtual EmbeddingVector embed(std::string_view text) const = 0;
    // Evaluation seam: text embedders use the body, the precomputed
    // adapter resolves by comment_id instead.
    virtual EmbeddingVector embed_comment(const Comment& comment) const {
        return embed(comment.body);
    }
};

// Stateless signed-hashing embedder over word unigrams and character
// trigrams of the lowercased text. Corpus-independent: no vocabulary to
// fit, so vectors are bit-identical across runs and platforms.
class HashedNgramEmbedder final : public CommentEmbedder {
public:
    // dim >= 16; throws UsageError below that.
    explicit HashedNgramEmbedder(std::size_t dim = 512);

    EmbedderDescriptor descriptor() const override;
    EmbeddingVector embed(std::string_view text) const override;

private:
    std::size_t dim_;
};

// First d_prime coordinates, re-normalized (zero stays zero).
// Throws DimensionError when d_prime exceeds v's dimension.
EmbeddingVector truncate(const EmbeddingVector& v, std::size_t d_prime);

// Vectors produced by an external embedder, loaded from a line-based
// file: first line `#dim=<d>`, then `comment_id<TAB>v1<TAB>...<TAB>vd`.
// Rows are normalized on load so lookups honor the unit-norm invariant.
class PrecomputedStore {
public:
    static PrecomputedStore load(const std::string& path);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    bool contains(const std::string& comment_id) const;
    // Throws MissingIdError for an absent id; a present all-zero row is
    // returned as the zero vector, not an error.
    const EmbeddingVector& lookup(const std::string& comment_id) const;

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, EmbeddingVector> vectors_;
};

// Adapter so a precomputed store can stand where an embedder is expected;
// resolves by comment_id, not text.
class StoreEmbedder final : public CommentEmbedder {
public:
    explicit StoreEmbedder(std::shared_ptr<PrecomputedStore> store) : store_(std::move(store)) {}

    EmbedderDescriptor descriptor() const override {
        return {"precomputed", store_->dim(), true};
    }
    // Under this adapter the argument is a comment_id, not body text.
    EmbeddingVector embed(std::string_view text) const override {
        return store_->lookup(std::string(text));
    }
    EmbeddingVector embed_comment(const Comment& comment) const override {
        return store_->lookup(comment.comment_id);
    }

private:
    std::shared_ptr<PrecomputedStore> store_;
};

}  // namespace leakaudit
