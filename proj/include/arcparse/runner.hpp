#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "arcparse/evaluation.hpp"
#include "arcparse/sparse_model.hpp"
#include "arcparse/types.hpp"
#include "arcparse/vocab.hpp"

namespace arcparse {

// High-level training configuration. Names must resolve in their registries;
// validate() throws before any work starts otherwise.
struct ModelConfig {
    std::string decoder = "cle";
    std::string loss = "hinge";
    std::string learner = "perceptron";  // perceptron | mira
    std::string strategy = "bucket";     // bucket | padded | budget
    int epochs = 30;
    int batch_size = 32;
    int token_budget = 1024;
    uint64_t seed = 1;
    int patience = 0;  // 0 disables early stopping
    EvalConfig eval;
    uint64_t hash_dimension = 1ull << 22;
    uint64_t label_dimension = 1ull << 18;
    double mira_c = 1.0;

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    uint64_t updates = 0;           // arc-level corrections this epoch
    uint64_t degenerate_skips = 0;  // skipped MIRA updates (zero feature diff)
    double dev_uas = std::numeric_limits<double>::quiet_NaN();
    double dev_las = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0.0;
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = -1;  // 1-based; -1 when no dev evaluation ran
    double best_dev_uas = std::numeric_limits<double>::quiet_NaN();
};

class Callback {
public:
    virtual ~Callback() = default;
    virtual void on_epoch_end(const EpochRecord& record, const SparseParserModel& model) = 0;
};

// Line-delimited JSON, one record per epoch, flushed as it is written so the
// log survives an aborted run.
class MetricsLogger : public Callback {
public:
    explicit MetricsLogger(const std::string& path);
    void on_epoch_end(const EpochRecord& record, const SparseParserModel& model) override;

private:
    std::ofstream out_;
};

// Writes model.epoch<k>.bin per epoch and keeps model.best.bin in sync with
// the best dev UAS seen so far.
class CheckpointWriter : public Callback {
public:
    explicit CheckpointWriter(const std::string& directory);
    void on_epoch_end(const EpochRecord& record, const SparseParserModel& model) override;

private:
    std::string directory_;
    double best_ = -1.0;
};

// Early stopping: strictly greater dev UAS counts as improvement, ties do
// not reset the counter. observe() returns true when training should stop.
class PatienceTracker {
public:
    explicit PatienceTracker(int patience) : patience_(patience) {}

    bool observe(double dev_uas) {
        ++epoch_;
        if (epoch_ == 1 || dev_uas > best_) {
            best_ = dev_uas;
            best_epoch_ = epoch_;
            stale_ = 0;
            return false;
        }
        ++stale_;
        return patience_ > 0 && stale_ >= patience_;
    }

    int best_epoch() const { return best_epoch_; }
    double best() const { return best_; }

private:
    int patience_;
    int epoch_ = 0;
    int stale_ = 0;
    int best_epoch_ = -1;
    double best_ = 0.0;
};

struct TrainResult {
    SparseParserModel model;
    TrainingHistory history;
};

// Online training of the sparse parser: per epoch the batching strategy
// (seeded with seed + epoch) fixes the sentence order, each sentence is
// scored with raw weights, decoded, and fed to the learner; dev decoding uses
// averaged weights. Returns the model of the best dev epoch (the final model
// when dev is empty). Callback exceptions abort training; per-epoch logs
// written so far stay on disk.
TrainResult train(const ModelConfig& config, const Vocabulary& vocab,
                  const std::vector<Sentence>& train_data, const std::vector<Sentence>& dev_data,
                  const std::vector<Callback*>& callbacks = {});

// Inference: one tree per sentence, heads from the decoder, labels from the
// label classifier. Pure; the model is not mutated.
std::vector<DependencyTree> run(const SparseParserModel& model,
                                const std::vector<Sentence>& data,
                                const std::string& decoder = "cle");

}  // namespace arcparse
