#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arcparse/types.hpp"
#include "arcparse/vocab.hpp"

namespace arcparse {

// First-order arc feature templates, hashed into a fixed-size weight space.
// The template list is fixed and versioned in the model header:
//   1  head form                       5  head form (x) dep form
//   2  head pos                        6  head form (x) dep pos
//   3  dep form                        7  head pos  (x) dep form
//   4  dep pos                         8  head pos  (x) dep pos
//   9  pos trigram around the head (x) dep pos
//  10  pos trigram around the dep  (x) head pos
//  11  pos sequence strictly between head and dep
// Every template is conjoined with the binned signed arc distance
// (1,2,3,4,5,6-10,>10 per direction). Head index 0 uses a root sentinel,
// out-of-range context positions use boundary sentinels, so the feature
// count per arc is always kTemplateCount.
struct FeatureSet {
    static constexpr int kTemplateCount = 11;
    static constexpr uint32_t kTemplateVersion = 1;

    uint64_t hash_dimension;

    explicit FeatureSet(uint64_t hash_dimension_ = 1ull << 22);
};

// Per-sentence cache of normalized-form and POS string hashes; feature
// extraction then only mixes integers. Forms are normalized with the same
// options the vocabulary was fit with so train and test agree.
class ArcFeatureContext {
public:
    ArcFeatureContext(const Sentence& sentence, const NormalizeOptions& normalization);

    int length() const { return n_; }

    // Writes FeatureSet::kTemplateCount hashed ids (< hash_dimension) to out.
    // Requires 0 <= h <= n, 1 <= d <= n, h != d.
    void extract(int h, int d, const FeatureSet& features, uint64_t* out) const;

private:
    uint64_t pos_at(int i) const;  // boundary sentinels outside [0, n]

    int n_ = 0;
    std::vector<uint64_t> form_hash_;  // index 0 = root sentinel
    std::vector<uint64_t> pos_hash_;
};

std::vector<uint64_t> extract_arc_features(const Sentence& sentence, int h, int d,
                                           const FeatureSet& features,
                                           const NormalizeOptions& normalization = {});

// Hashed linear weights with the lazy averaging trick: averaged weights are
// w - w_sum / max(1, update_count) at any time, where w_sum accumulates
// (clock - 1) * delta per change and the clock advances once per example.
struct SparseWeights {
    std::vector<double> w;
    std::vector<double> w_sum;
    uint64_t update_count = 0;

    explicit SparseWeights(uint64_t dimension)
        : w(dimension, 0.0), w_sum(dimension, 0.0) {}

    uint64_t dimension() const { return w.size(); }
    void start_example() { ++update_count; }

    void add(uint64_t feature, double delta) {
        w[feature] += delta;
        if (update_count > 1) w_sum[feature] += static_cast<double>(update_count - 1) * delta;
    }

    double raw(uint64_t feature) const { return w[feature]; }
    double averaged(uint64_t feature) const {
        return w[feature] - w_sum[feature] / static_cast<double>(std::max<uint64_t>(1, update_count));
    }
    std::vector<double> averaged_dense() const;
};

// S[h][d] = sum of weights at the arc's feature ids. Ignored entries (column
// 0, diagonal) are left at zero.
ScoreMatrix score_all_arcs(const ArcFeatureContext& ctx, const FeatureSet& features,
                           const SparseWeights& weights, bool averaged);
ScoreMatrix score_all_arcs(const ArcFeatureContext& ctx, const FeatureSet& features,
                           std::span<const double> dense_weights);

// Structured perceptron step: per wrongly attached dependent, add the gold
// arc's features and subtract the predicted arc's. Advances the averaging
// clock once per call. Returns the number of wrong dependents.
int perceptron_update(SparseWeights& weights, const ArcFeatureContext& ctx,
                      const FeatureSet& features, const DependencyTree& predicted,
                      const DependencyTree& gold);

struct MiraUpdateInfo {
    double tau = 0.0;
    double loss = 0.0;
    int hamming = 0;
    bool degenerate = false;  // positive loss but zero feature difference
};

// Single-best passive-aggressive step with Hamming margin:
// tau = min(C, loss / ||delta_phi||^2), w += tau * delta_phi. Degenerate
// updates (hash collisions wiped out the feature difference) are skipped and
// flagged. Advances the averaging clock once per call.
MiraUpdateInfo mira_update(SparseWeights& weights, const ArcFeatureContext& ctx,
                           const FeatureSet& features, const DependencyTree& predicted,
                           const DependencyTree& gold, double aggressiveness_cap = 1.0);

// Per-arc label classifier over the same hashed feature ids, reduced into a
// per-label weight table of its own (smaller) dimension. label_dimension
// defaults far below the arc dimension: one dense array per label.
struct LabelWeights {
    std::vector<std::string> labels;
    uint64_t label_dimension = 0;
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> w_sum;
    uint64_t update_count = 0;

    LabelWeights() = default;
    LabelWeights(std::vector<std::string> inventory, uint64_t dimension);

    int label_index(const std::string& label) const;  // -1 when unknown
    void start_example() { ++update_count; }
    void add(int label, uint64_t feature, double delta);
    double value(int label, uint64_t feature, bool averaged) const;
};

// Multiclass averaged-perceptron step over the gold arcs of one sentence.
// Returns the number of label mistakes.
int label_perceptron_update(LabelWeights& weights, const ArcFeatureContext& ctx,
                            const FeatureSet& features, const DependencyTree& gold);

std::vector<std::string> predict_labels(const ArcFeatureContext& ctx, const FeatureSet& features,
                                        const std::vector<int>& heads,
                                        const LabelWeights& weights, bool averaged);
std::vector<std::string> predict_labels(const ArcFeatureContext& ctx, const FeatureSet& features,
                                        const std::vector<int>& heads,
                                        std::span<const std::vector<double>> dense_label_weights,
                                        const std::vector<std::string>& labels);

// Trained parser ready for inference: averaged weights baked into dense
// arrays. The file layout is little-endian binary: header (magic, version,
// template version, normalization flags, dimensions, label inventory)
// followed by the dense weight arrays as 64-bit floats.
struct SparseParserModel {
    FeatureSet features;
    uint64_t label_dimension = 0;
    NormalizeOptions normalization;
    std::vector<std::string> labels;
    std::vector<double> arc_weights;
    std::vector<std::vector<double>> label_weights;

    explicit SparseParserModel(FeatureSet features_ = FeatureSet()) : features(features_) {}

    void save_file(const std::string& path) const;
    static SparseParserModel load_file(const std::string& path);
};

// Model/vocabulary consistency: label inventory and normalization flags must
// agree. Throws ValidationError on mismatch.
void verify_compatible(const SparseParserModel& model, const Vocabulary& vocab);

}  // namespace arcparse
