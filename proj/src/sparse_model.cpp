#include "arcparse/sparse_model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace arcparse {

namespace {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

// Fixed 64-bit FNV-1a plus a splitmix-style combiner; feature ids must be
// reproducible across runs and platforms.
constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a(const std::string& s) {
    uint64_t h = kFnvOffset;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

uint64_t mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

constexpr uint64_t kRootFormSentinel = 0x8c1f6a3d5e9b2471ull;
constexpr uint64_t kRootPosSentinel = 0x3b9d74c2a6e58f13ull;
constexpr uint64_t kBosSentinel = 0x6d2e9f84b7c3a155ull;
constexpr uint64_t kEosSentinel = 0x19f3c5d8e2a47b66ull;
constexpr uint64_t kEmptySequence = 0x5a78e41cd93b62f7ull;

// Signed distance bins 1,2,3,4,5,6-10,>10; direction in the high bits.
uint64_t distance_bin(int h, int d) {
    const int delta = d - h;
    const int dist = delta > 0 ? delta : -delta;
    uint64_t code;
    if (dist <= 5) {
        code = static_cast<uint64_t>(dist);
    } else if (dist <= 10) {
        code = 6;
    } else {
        code = 7;
    }
    return delta > 0 ? code : code | 0x10;
}

bool power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

FeatureSet::FeatureSet(uint64_t hash_dimension_) : hash_dimension(hash_dimension_) {
    if (!power_of_two(hash_dimension) || hash_dimension < (1ull << 16)) {
        throw std::invalid_argument(
            "FeatureSet: hash_dimension must be a power of two >= 2^16");
    }
}

ArcFeatureContext::ArcFeatureContext(const Sentence& sentence,
                                     const NormalizeOptions& normalization) {
    n_ = sentence.size();
    form_hash_.reserve(n_ + 1);
    pos_hash_.reserve(n_ + 1);
    form_hash_.push_back(kRootFormSentinel);
    pos_hash_.push_back(kRootPosSentinel);
    for (const Token& token : sentence.tokens) {
        form_hash_.push_back(fnv1a(normalize(token.form, normalization)));
        pos_hash_.push_back(fnv1a(token.upos));
    }
}

uint64_t ArcFeatureContext::pos_at(int i) const {
    if (i < 0) return kBosSentinel;
    if (i > n_) return kEosSentinel;
    return pos_hash_[i];
}

void ArcFeatureContext::extract(int h, int d, const FeatureSet& features, uint64_t* out) const {
    if (h < 0 || h > n_ || d < 1 || d > n_ || h == d) {
        throw std::out_of_range("extract: invalid arc (" + std::to_string(h) + ", " +
                                std::to_string(d) + ") for n=" + std::to_string(n_));
    }
    const uint64_t mask = features.hash_dimension - 1;
    const uint64_t bin = distance_bin(h, d);
    const uint64_t hf = form_hash_[h];
    const uint64_t hp = pos_hash_[h];
    const uint64_t df = form_hash_[d];
    const uint64_t dp = pos_hash_[d];

    const auto emit = [&](int slot, uint64_t key) { out[slot] = mix(key, bin) & mask; };

    emit(0, mix(1, hf));
    emit(1, mix(2, hp));
    emit(2, mix(3, df));
    emit(3, mix(4, dp));
    emit(4, mix(mix(5, hf), df));
    emit(5, mix(mix(6, hf), dp));
    emit(6, mix(mix(7, hp), df));
    emit(7, mix(mix(8, hp), dp));
    emit(8, mix(mix(mix(mix(9, pos_at(h - 1)), hp), pos_at(h + 1)), dp));
    emit(9, mix(mix(mix(mix(10, hp), pos_at(d - 1)), dp), pos_at(d + 1)));

    uint64_t between = kEmptySequence;
    const int lo = h < d ? h : d;
    const int hi = h < d ? d : h;
    for (int i = lo + 1; i < hi; ++i) between = mix(between, pos_hash_[i]);
    emit(10, mix(mix(mix(11, hp), between), dp));
}

std::vector<uint64_t> extract_arc_features(const Sentence& sentence, int h, int d,
                                           const FeatureSet& features,
                                           const NormalizeOptions& normalization) {
    const ArcFeatureContext ctx(sentence, normalization);
    std::vector<uint64_t> out(FeatureSet::kTemplateCount);
    ctx.extract(h, d, features, out.data());
    return out;
}

std::vector<double> SparseWeights::averaged_dense() const {
    std::vector<double> out(w.size());
    const double inv = 1.0 / static_cast<double>(std::max<uint64_t>(1, update_count));
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] - w_sum[i] * inv;
    return out;
}

ScoreMatrix score_all_arcs(const ArcFeatureContext& ctx, const FeatureSet& features,
                           const SparseWeights& weights, bool averaged) {
    const int n = ctx.length();
    ScoreMatrix S(n);
    const double inv =
        1.0 / static_cast<double>(std::max<uint64_t>(1, weights.update_count));
    uint64_t feats[FeatureSet::kTemplateCount];
    for (int d = 1; d <= n; ++d) {
        for (int h = 0; h <= n; ++h) {
            if (h == d) continue;
            ctx.extract(h, d, features, feats);
            double score = 0.0;
            if (averaged) {
                for (const uint64_t f : feats) score += weights.w[f] - weights.w_sum[f] * inv;
            } else {
                for (const uint64_t f : feats) score += weights.w[f];
            }
            S.at(h, d) = score;
        }
    }
    return S;
}

ScoreMatrix score_all_arcs(const ArcFeatureContext& ctx, const FeatureSet& features,
                           std::span<const double> dense_weights) {
    const int n = ctx.length();
    ScoreMatrix S(n);
    uint64_t feats[FeatureSet::kTemplateCount];
    for (int d = 1; d <= n; ++d) {
        for (int h = 0; h <= n; ++h) {
            if (h == d) continue;
            ctx.extract(h, d, features, feats);
            double score = 0.0;
            for (const uint64_t f : feats) score += dense_weights[f];
            S.at(h, d) = score;
        }
    }
    return S;
}

namespace {

void check_tree_length(const ArcFeatureContext& ctx, const DependencyTree& tree,
                       const char* who) {
    if (tree.size() != ctx.length()) {
        throw ValidationError(std::string(who) + ": tree length " + std::to_string(tree.size()) +
                              " does not match sentence length " + std::to_string(ctx.length()));
    }
}

}  // namespace

int perceptron_update(SparseWeights& weights, const ArcFeatureContext& ctx,
                      const FeatureSet& features, const DependencyTree& predicted,
                      const DependencyTree& gold) {
    check_tree_length(ctx, predicted, "perceptron_update");
    check_tree_length(ctx, gold, "perceptron_update");
    weights.start_example();
    uint64_t feats[FeatureSet::kTemplateCount];
    int mistakes = 0;
    for (int d = 1; d <= ctx.length(); ++d) {
        const int hp = predicted.heads[d - 1];
        const int hg = gold.heads[d - 1];
        if (hp == hg) continue;
        ++mistakes;
        ctx.extract(hg, d, features, feats);
        for (const uint64_t f : feats) weights.add(f, 1.0);
        ctx.extract(hp, d, features, feats);
        for (const uint64_t f : feats) weights.add(f, -1.0);
    }
    return mistakes;
}

MiraUpdateInfo mira_update(SparseWeights& weights, const ArcFeatureContext& ctx,
                           const FeatureSet& features, const DependencyTree& predicted,
                           const DependencyTree& gold, double aggressiveness_cap) {
    check_tree_length(ctx, predicted, "mira_update");
    check_tree_length(ctx, gold, "mira_update");
    weights.start_example();

    uint64_t feats[FeatureSet::kTemplateCount];
    std::unordered_map<uint64_t, double> delta;  // phi(gold) - phi(predicted)
    int hamming = 0;
    double score_gap = 0.0;  // score(predicted) - score(gold), raw weights
    for (int d = 1; d <= ctx.length(); ++d) {
        const int hp = predicted.heads[d - 1];
        const int hg = gold.heads[d - 1];
        if (hp == hg) continue;
        ++hamming;
        ctx.extract(hg, d, features, feats);
        for (const uint64_t f : feats) {
            delta[f] += 1.0;
            score_gap -= weights.w[f];
        }
        ctx.extract(hp, d, features, feats);
        for (const uint64_t f : feats) {
            delta[f] -= 1.0;
            score_gap += weights.w[f];
        }
    }

    MiraUpdateInfo info;
    info.hamming = hamming;
    if (hamming == 0) return info;
    info.loss = std::max(0.0, static_cast<double>(hamming) + score_gap);
    if (info.loss == 0.0) return info;

    // Sorted ids keep the float reductions deterministic.
    std::vector<std::pair<uint64_t, double>> entries(delta.begin(), delta.end());
    std::sort(entries.begin(), entries.end());
    double sq_norm = 0.0;
    for (const auto& [f, v] : entries) sq_norm += v * v;
    if (sq_norm == 0.0) {
        info.degenerate = true;
        return info;
    }
    info.tau = std::min(aggressiveness_cap, info.loss / sq_norm);
    for (const auto& [f, v] : entries) {
        if (v != 0.0) weights.add(f, info.tau * v);
    }
    return info;
}

LabelWeights::LabelWeights(std::vector<std::string> inventory, uint64_t dimension)
    : labels(std::move(inventory)), label_dimension(dimension) {
    if (!power_of_two(dimension)) {
        throw std::invalid_argument("LabelWeights: dimension must be a power of two");
    }
    w.assign(labels.size(), std::vector<double>(dimension, 0.0));
    w_sum.assign(labels.size(), std::vector<double>(dimension, 0.0));
}

int LabelWeights::label_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return static_cast<int>(i);
    }
    return -1;
}

void LabelWeights::add(int label, uint64_t feature, double delta) {
    w[label][feature] += delta;
    if (update_count > 1) {
        w_sum[label][feature] += static_cast<double>(update_count - 1) * delta;
    }
}

double LabelWeights::value(int label, uint64_t feature, bool averaged) const {
    if (!averaged) return w[label][feature];
    const double inv = 1.0 / static_cast<double>(std::max<uint64_t>(1, update_count));
    return w[label][feature] - w_sum[label][feature] * inv;
}

namespace {

int argmax_label(const LabelWeights& weights, const uint64_t* feats, uint64_t mask,
                 bool averaged) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < static_cast<int>(weights.labels.size()); ++l) {
        double score = 0.0;
        for (int k = 0; k < FeatureSet::kTemplateCount; ++k) {
            score += weights.value(l, feats[k] & mask, averaged);
        }
        if (score > best_score) {
            best_score = score;
            best = l;
        }
    }
    return best;
}

}  // namespace

int label_perceptron_update(LabelWeights& weights, const ArcFeatureContext& ctx,
                            const FeatureSet& features, const DependencyTree& gold) {
    if (weights.labels.empty()) {
        throw std::invalid_argument("label_perceptron_update: empty label inventory");
    }
    check_tree_length(ctx, gold, "label_perceptron_update");
    weights.start_example();
    const uint64_t mask = weights.label_dimension - 1;
    uint64_t feats[FeatureSet::kTemplateCount];
    int mistakes = 0;
    for (int d = 1; d <= ctx.length(); ++d) {
        const int gold_label = weights.label_index(gold.labels[d - 1]);
        if (gold_label < 0) continue;  // label outside the inventory; nothing to learn
        ctx.extract(gold.heads[d - 1], d, features, feats);
        const int predicted = argmax_label(weights, feats, mask, /*averaged=*/false);
        if (predicted == gold_label) continue;
        ++mistakes;
        for (int k = 0; k < FeatureSet::kTemplateCount; ++k) {
            weights.add(gold_label, feats[k] & mask, 1.0);
            weights.add(predicted, feats[k] & mask, -1.0);
        }
    }
    return mistakes;
}

std::vector<std::string> predict_labels(const ArcFeatureContext& ctx, const FeatureSet& features,
                                        const std::vector<int>& heads,
                                        const LabelWeights& weights, bool averaged) {
    if (weights.labels.empty()) {
        throw std::invalid_argument("predict_labels: empty label inventory");
    }
    if (static_cast<int>(heads.size()) != ctx.length()) {
        throw ValidationError("predict_labels: head count does not match sentence length");
    }
    const uint64_t mask = weights.label_dimension - 1;
    uint64_t feats[FeatureSet::kTemplateCount];
    std::vector<std::string> out;
    out.reserve(heads.size());
    for (int d = 1; d <= ctx.length(); ++d) {
        ctx.extract(heads[d - 1], d, features, feats);
        out.push_back(weights.labels[argmax_label(weights, feats, mask, averaged)]);
    }
    return out;
}

std::vector<std::string> predict_labels(const ArcFeatureContext& ctx, const FeatureSet& features,
                                        const std::vector<int>& heads,
                                        std::span<const std::vector<double>> dense_label_weights,
                                        const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("predict_labels: empty label inventory");
    if (static_cast<int>(heads.size()) != ctx.length()) {
        throw ValidationError("predict_labels: head count does not match sentence length");
    }
    const uint64_t mask = dense_label_weights.empty()
                              ? 0
                              : static_cast<uint64_t>(dense_label_weights[0].size()) - 1;
    uint64_t feats[FeatureSet::kTemplateCount];
    std::vector<std::string> out;
    out.reserve(heads.size());
    for (int d = 1; d <= ctx.length(); ++d) {
        ctx.extract(heads[d - 1], d, features, feats);
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int l = 0; l < static_cast<int>(labels.size()); ++l) {
            double score = 0.0;
            for (int k = 0; k < FeatureSet::kTemplateCount; ++k) {
                score += dense_label_weights[l][feats[k] & mask];
            }
            if (score > best_score) {
                best_score = score;
                best = l;
            }
        }
        out.push_back(labels[best]);
    }
    return out;
}

// --- model file -------------------------------------------------------------

namespace {

constexpr uint32_t kMagic = 0x41504d31;  // "APM1"
constexpr uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("model file truncated");
    return value;
}

void write_doubles(std::ostream& out, const std::vector<double>& values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

void read_doubles(std::istream& in, std::vector<double>& values, std::size_t count) {
    values.resize(count);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("model file truncated");
}

}  // namespace

void SparseParserModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_pod<uint32_t>(out, kMagic);
    write_pod<uint32_t>(out, kFormatVersion);
    write_pod<uint32_t>(out, FeatureSet::kTemplateVersion);
    write_pod<uint8_t>(out, normalization.lowercase ? 1 : 0);
    write_pod<uint8_t>(out, normalization.number_sentinel ? 1 : 0);
    write_pod<uint64_t>(out, features.hash_dimension);
    write_pod<uint64_t>(out, label_dimension);
    write_pod<uint32_t>(out, static_cast<uint32_t>(labels.size()));
    for (const std::string& label : labels) {
        write_pod<uint32_t>(out, static_cast<uint32_t>(label.size()));
        out.write(label.data(), static_cast<std::streamsize>(label.size()));
    }
    write_doubles(out, arc_weights);
    for (const auto& lw : label_weights) write_doubles(out, lw);
    if (!out) throw std::runtime_error("failed writing model to " + path);
}

SparseParserModel SparseParserModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    if (read_pod<uint32_t>(in) != kMagic) {
        throw ValidationError(path + " is not a parser model file");
    }
    if (read_pod<uint32_t>(in) != kFormatVersion) {
        throw ValidationError(path + ": unsupported model format version");
    }
    if (read_pod<uint32_t>(in) != FeatureSet::kTemplateVersion) {
        throw ValidationError(path + ": incompatible feature template version");
    }
    NormalizeOptions normalization;
    normalization.lowercase = read_pod<uint8_t>(in) != 0;
    normalization.number_sentinel = read_pod<uint8_t>(in) != 0;
    const uint64_t hash_dimension = read_pod<uint64_t>(in);
    SparseParserModel model{FeatureSet(hash_dimension)};
    model.normalization = normalization;
    model.label_dimension = read_pod<uint64_t>(in);
    const uint32_t label_count = read_pod<uint32_t>(in);
    for (uint32_t i = 0; i < label_count; ++i) {
        const uint32_t len = read_pod<uint32_t>(in);
        std::string label(len, '\0');
        in.read(label.data(), len);
        if (!in) throw std::runtime_error("model file truncated");
        model.labels.push_back(std::move(label));
    }
    read_doubles(in, model.arc_weights, hash_dimension);
    model.label_weights.resize(label_count);
    for (auto& lw : model.label_weights) read_doubles(in, lw, model.label_dimension);
    return model;
}

void verify_compatible(const SparseParserModel& model, const Vocabulary& vocab) {
    if (!(model.normalization == vocab.normalization())) {
        throw ValidationError("model/vocabulary mismatch: normalization options differ");
    }
    const std::vector<std::string> inventory = vocab.deprel_inventory();
    if (model.labels != inventory) {
        throw ValidationError("model/vocabulary mismatch: label inventories differ (" +
                              std::to_string(model.labels.size()) + " vs " +
                              std::to_string(inventory.size()) + " labels)");
    }
}

}  // namespace arcparse
