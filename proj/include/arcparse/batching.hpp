#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arcparse/vocab.hpp"

namespace arcparse {

// Padded batch of encoded sentences. Id matrices are rows x cols with
// cols = Lmax + 1 (root column included); padding cells hold PAD and are
// mask=false. Gold matrices are rows x (cols - 1), padded with -1 heads and
// PAD label ids.
struct Batch {
    int rows = 0;
    int cols = 0;
    std::vector<int32_t> word_ids;
    std::vector<int32_t> upos_ids;
    std::vector<uint8_t> mask;
    std::vector<int32_t> lengths;
    std::vector<int32_t> gold_heads;
    std::vector<int32_t> gold_label_ids;
    std::vector<int32_t> sentence_indices;

    int32_t word_id(int row, int col) const { return word_ids[row * cols + col]; }
    int32_t upos_id(int row, int col) const { return upos_ids[row * cols + col]; }
    bool masked_on(int row, int col) const { return mask[row * cols + col] != 0; }
    int32_t gold_head(int row, int dep) const { return gold_heads[row * (cols - 1) + dep]; }
    int32_t gold_label_id(int row, int dep) const {
        return gold_label_ids[row * (cols - 1) + dep];
    }
};

// Batching strategies. Every strategy preserves the input multiset (the
// sentence_indices across batches partition 0..N-1) and keeps the last
// partial batch. A seed makes the ordering deterministic-shuffled; no seed
// keeps deterministic unshuffled order.

// Groups sentences of equal length; batches never mix lengths, so the only
// padding is the shared root column.
std::vector<Batch> bucket_batches(const std::vector<EncodedSentence>& data, int batch_size,
                                  std::optional<uint64_t> shuffle_seed = std::nullopt);

// Consecutive fixed-size chunks padded to the longest sentence in the chunk.
std::vector<Batch> padded_batches(const std::vector<EncodedSentence>& data, int batch_size,
                                  std::optional<uint64_t> shuffle_seed = std::nullopt);

// Length-sorted greedy packing under rows x (Lmax + 1) <= token_budget.
// Throws when a single sentence exceeds the budget.
std::vector<Batch> token_budget_batches(const std::vector<EncodedSentence>& data,
                                        int token_budget,
                                        std::optional<uint64_t> shuffle_seed = std::nullopt);

}  // namespace arcparse
