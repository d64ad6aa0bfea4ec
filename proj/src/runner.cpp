#include "arcparse/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "arcparse/batching.hpp"
#include "arcparse/conllu.hpp"
#include "arcparse/decoders.hpp"
#include "arcparse/loss.hpp"

namespace arcparse {

namespace {

bool known_learner(const std::string& name) { return name == "perceptron" || name == "mira"; }

bool known_strategy(const std::string& name) {
    return name == "bucket" || name == "padded" || name == "budget";
}

std::vector<Batch> make_batches(const std::string& strategy,
                                const std::vector<EncodedSentence>& data,
                                const ModelConfig& config, uint64_t epoch_seed) {
    if (strategy == "bucket") return bucket_batches(data, config.batch_size, epoch_seed);
    if (strategy == "padded") return padded_batches(data, config.batch_size, epoch_seed);
    return token_budget_batches(data, config.token_budget, epoch_seed);
}

}  // namespace

void ModelConfig::validate() const {
    decoder_by_name(decoder);
    loss_by_name(loss);
    if (!known_learner(learner)) {
        throw std::invalid_argument("unknown learner '" + learner + "' (known: perceptron, mira)");
    }
    if (!known_strategy(strategy)) {
        throw std::invalid_argument("unknown strategy '" + strategy +
                                    "' (known: bucket, padded, budget)");
    }
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (token_budget < 1) throw std::invalid_argument("token_budget must be >= 1");
    if (patience < 0) throw std::invalid_argument("patience must be >= 0");
    if (mira_c <= 0.0) throw std::invalid_argument("mira_c must be > 0");
    FeatureSet probe(hash_dimension);  // validates the dimension
    (void)probe;
    LabelWeights label_probe({"root"}, label_dimension);
    (void)label_probe;
}

MetricsLogger::MetricsLogger(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open metrics log " + path + " for writing");
}

void MetricsLogger::on_epoch_end(const EpochRecord& record, const SparseParserModel&) {
    nlohmann::json j;
    j["epoch"] = record.epoch;
    j["updates"] = record.updates;
    j["degenerate_skips"] = record.degenerate_skips;
    if (std::isnan(record.dev_uas)) {
        j["dev_uas"] = nullptr;
        j["dev_las"] = nullptr;
    } else {
        j["dev_uas"] = record.dev_uas;
        j["dev_las"] = record.dev_las;
    }
    j["seconds"] = record.seconds;
    out_ << j.dump() << '\n';
    out_.flush();
}

CheckpointWriter::CheckpointWriter(const std::string& directory) : directory_(directory) {
    std::filesystem::create_directories(directory_);
}

void CheckpointWriter::on_epoch_end(const EpochRecord& record, const SparseParserModel& model) {
    const std::string epoch_path =
        (std::filesystem::path(directory_) / ("model.epoch" + std::to_string(record.epoch) + ".bin"))
            .string();
    model.save_file(epoch_path);
    if (!std::isnan(record.dev_uas) && record.dev_uas > best_) {
        best_ = record.dev_uas;
        model.save_file((std::filesystem::path(directory_) / "model.best.bin").string());
    }
}

TrainResult train(const ModelConfig& config, const Vocabulary& vocab,
                  const std::vector<Sentence>& train_data, const std::vector<Sentence>& dev_data,
                  const std::vector<Callback*>& callbacks) {
    config.validate();
    if (train_data.empty()) throw std::invalid_argument("train: empty training set");
    if (dev_data.empty() && config.patience > 0) {
        throw std::invalid_argument("train: patience > 0 requires a dev set");
    }

    const DecoderFn decoder = decoder_by_name(config.decoder);
    const FeatureSet features(config.hash_dimension);
    const std::vector<std::string> inventory = vocab.deprel_inventory();

    std::vector<EncodedSentence> encoded;
    std::vector<ArcFeatureContext> contexts;
    std::vector<DependencyTree> gold;
    encoded.reserve(train_data.size());
    contexts.reserve(train_data.size());
    gold.reserve(train_data.size());
    for (const Sentence& sentence : train_data) {
        encoded.push_back(vocab.encode(sentence));
        contexts.emplace_back(sentence, vocab.normalization());
        gold.push_back(gold_tree(sentence));
    }

    std::vector<ArcFeatureContext> dev_contexts;
    std::vector<DependencyTree> dev_gold;
    for (const Sentence& sentence : dev_data) {
        dev_contexts.emplace_back(sentence, vocab.normalization());
        dev_gold.push_back(gold_tree(sentence));
    }

    SparseWeights arc_weights(config.hash_dimension);
    LabelWeights label_weights(inventory, config.label_dimension);

    const auto bake = [&]() {
        SparseParserModel model{features};
        model.label_dimension = config.label_dimension;
        model.normalization = vocab.normalization();
        model.labels = inventory;
        model.arc_weights = arc_weights.averaged_dense();
        model.label_weights.reserve(inventory.size());
        const double inv =
            1.0 / static_cast<double>(std::max<uint64_t>(1, label_weights.update_count));
        for (std::size_t l = 0; l < inventory.size(); ++l) {
            std::vector<double> dense(label_weights.label_dimension);
            for (std::size_t f = 0; f < dense.size(); ++f) {
                dense[f] = label_weights.w[l][f] - label_weights.w_sum[l][f] * inv;
            }
            model.label_weights.push_back(std::move(dense));
        }
        return model;
    };

    TrainingHistory history;
    PatienceTracker patience(config.patience);
    SparseParserModel best_model{features};
    bool have_best = false;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto started = std::chrono::steady_clock::now();
        EpochRecord record;
        record.epoch = epoch;

        const std::vector<Batch> batches =
            make_batches(config.strategy, encoded, config, config.seed + epoch);
        for (const Batch& batch : batches) {
            for (int row = 0; row < batch.rows; ++row) {
                const int idx = batch.sentence_indices[row];
                const ArcFeatureContext& ctx = contexts[idx];
                const ScoreMatrix S = score_all_arcs(ctx, features, arc_weights, false);
                const DependencyTree predicted = decoder(S);
                if (config.learner == "perceptron") {
                    record.updates += static_cast<uint64_t>(
                        perceptron_update(arc_weights, ctx, features, predicted, gold[idx]));
                } else {
                    const MiraUpdateInfo info = mira_update(arc_weights, ctx, features, predicted,
                                                            gold[idx], config.mira_c);
                    if (info.degenerate) ++record.degenerate_skips;
                    if (info.tau > 0.0) record.updates += static_cast<uint64_t>(info.hamming);
                }
                label_perceptron_update(label_weights, ctx, features, gold[idx]);
            }
        }

        const SparseParserModel snapshot = bake();
        bool stop = false;
        if (!dev_data.empty()) {
            std::vector<DependencyTree> dev_pred;
            dev_pred.reserve(dev_data.size());
            for (const ArcFeatureContext& ctx : dev_contexts) {
                const ScoreMatrix S =
                    score_all_arcs(ctx, features, std::span<const double>(snapshot.arc_weights));
                DependencyTree tree = decoder(S);
                tree.labels = predict_labels(
                    ctx, features, tree.heads,
                    std::span<const std::vector<double>>(snapshot.label_weights),
                    snapshot.labels);
                dev_pred.push_back(std::move(tree));
            }
            const EvalResult dev = evaluate(dev_data, dev_pred, config.eval);
            record.dev_uas = dev.uas;
            record.dev_las = dev.las;
            stop = patience.observe(dev.uas);
            if (patience.best_epoch() == epoch) {
                best_model = snapshot;
                have_best = true;
                history.best_epoch = epoch;
                history.best_dev_uas = dev.uas;
            }
        }

        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        history.epochs.push_back(record);
        for (Callback* callback : callbacks) {
            callback->on_epoch_end(record, snapshot);
        }
        if (stop) break;
    }

    TrainResult result{have_best ? std::move(best_model) : bake(), std::move(history)};
    return result;
}

std::vector<DependencyTree> run(const SparseParserModel& model,
                                const std::vector<Sentence>& data, const std::string& decoder) {
    const DecoderFn decode = decoder_by_name(decoder);
    std::vector<DependencyTree> trees;
    trees.reserve(data.size());
    for (const Sentence& sentence : data) {
        const ArcFeatureContext ctx(sentence, model.normalization);
        const ScoreMatrix S =
            score_all_arcs(ctx, model.features, std::span<const double>(model.arc_weights));
        DependencyTree tree = decode(S);
        tree.labels = predict_labels(ctx, model.features, tree.heads,
                                     std::span<const std::vector<double>>(model.label_weights),
                                     model.labels);
        trees.push_back(std::move(tree));
    }
    return trees;
}

}  // namespace arcparse
