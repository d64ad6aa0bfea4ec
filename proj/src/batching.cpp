#include "arcparse/batching.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "arcparse/rng.hpp"

namespace arcparse {

namespace {

Batch build_batch(const std::vector<EncodedSentence>& data, const std::vector<int>& indices) {
    Batch batch;
    batch.rows = static_cast<int>(indices.size());
    int lmax = 0;
    for (int idx : indices) lmax = std::max(lmax, data[idx].length);
    batch.cols = lmax + 1;

    batch.word_ids.assign(static_cast<std::size_t>(batch.rows) * batch.cols, Vocabulary::kPad);
    batch.upos_ids.assign(static_cast<std::size_t>(batch.rows) * batch.cols, Vocabulary::kPad);
    batch.mask.assign(static_cast<std::size_t>(batch.rows) * batch.cols, 0);
    batch.gold_heads.assign(static_cast<std::size_t>(batch.rows) * lmax, -1);
    batch.gold_label_ids.assign(static_cast<std::size_t>(batch.rows) * lmax, Vocabulary::kPad);
    batch.lengths.reserve(batch.rows);
    batch.sentence_indices = {indices.begin(), indices.end()};

    for (int row = 0; row < batch.rows; ++row) {
        const EncodedSentence& enc = data[indices[row]];
        batch.lengths.push_back(enc.length);
        for (int col = 0; col <= enc.length; ++col) {
            batch.word_ids[row * batch.cols + col] = enc.word_ids[col];
            batch.upos_ids[row * batch.cols + col] = enc.upos_ids[col];
            batch.mask[row * batch.cols + col] = 1;
        }
        for (int dep = 0; dep < enc.length; ++dep) {
            batch.gold_heads[row * lmax + dep] = enc.gold_heads[dep];
            batch.gold_label_ids[row * lmax + dep] = enc.gold_label_ids[dep];
        }
    }
    return batch;
}

std::vector<Batch> chunk_into_batches(const std::vector<EncodedSentence>& data,
                                      const std::vector<int>& order, int batch_size) {
    std::vector<Batch> batches;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
        const std::size_t end = std::min(order.size(), start + batch_size);
        batches.push_back(
            build_batch(data, {order.begin() + start, order.begin() + end}));
    }
    return batches;
}

}  // namespace

std::vector<Batch> bucket_batches(const std::vector<EncodedSentence>& data, int batch_size,
                                  std::optional<uint64_t> shuffle_seed) {
    if (batch_size < 1) throw std::invalid_argument("bucket_batches: batch_size must be >= 1");
    if (data.empty()) return {};

    std::map<int, std::vector<int>> buckets;  // ascending length
    for (int i = 0; i < static_cast<int>(data.size()); ++i) {
        buckets[data[i].length].push_back(i);
    }

    std::optional<SplitMix64> rng;
    if (shuffle_seed) rng.emplace(*shuffle_seed);

    std::vector<Batch> batches;
    for (auto& [length, indices] : buckets) {
        (void)length;
        if (rng) deterministic_shuffle(indices, *rng);
        auto bucket_batches = chunk_into_batches(data, indices, batch_size);
        std::move(bucket_batches.begin(), bucket_batches.end(), std::back_inserter(batches));
    }
    if (rng) deterministic_shuffle(batches, *rng);
    return batches;
}

std::vector<Batch> padded_batches(const std::vector<EncodedSentence>& data, int batch_size,
                                  std::optional<uint64_t> shuffle_seed) {
    if (batch_size < 1) throw std::invalid_argument("padded_batches: batch_size must be >= 1");
    if (data.empty()) return {};

    std::vector<int> order(data.size());
    for (int i = 0; i < static_cast<int>(data.size()); ++i) order[i] = i;
    if (shuffle_seed) {
        SplitMix64 rng(*shuffle_seed);
        deterministic_shuffle(order, rng);
    }
    return chunk_into_batches(data, order, batch_size);
}

std::vector<Batch> token_budget_batches(const std::vector<EncodedSentence>& data,
                                        int token_budget,
                                        std::optional<uint64_t> shuffle_seed) {
    if (token_budget < 1) {
        throw std::invalid_argument("token_budget_batches: token_budget must be >= 1");
    }
    if (data.empty()) return {};

    for (int i = 0; i < static_cast<int>(data.size()); ++i) {
        if (data[i].length + 1 > token_budget) {
            throw std::invalid_argument("token_budget_batches: sentence " + std::to_string(i) +
                                        " of length " + std::to_string(data[i].length) +
                                        " exceeds token budget " + std::to_string(token_budget));
        }
    }

    std::vector<int> order(data.size());
    for (int i = 0; i < static_cast<int>(data.size()); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return data[a].length < data[b].length; });

    // Ascending lengths: the newest sentence always carries the batch Lmax.
    std::vector<Batch> batches;
    std::vector<int> current;
    for (int idx : order) {
        const int cost = (static_cast<int>(current.size()) + 1) * (data[idx].length + 1);
        if (!current.empty() && cost > token_budget) {
            batches.push_back(build_batch(data, current));
            current.clear();
        }
        current.push_back(idx);
    }
    if (!current.empty()) batches.push_back(build_batch(data, current));

    if (shuffle_seed) {
        SplitMix64 rng(*shuffle_seed);
        deterministic_shuffle(batches, rng);
    }
    return batches;
}

}  // namespace arcparse
