#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "arcparse/types.hpp"

namespace arcparse {

struct LengthStats {
    int n = 0;
    int trials = 0;
    double mean_seconds = 0.0;
    double stddev_seconds = 0.0;  // sample standard deviation
};

struct BenchTrial {
    int n = 0;
    int trial = 0;
    double seconds = 0.0;
};

struct BenchReport {
    std::string decoder;
    uint64_t sentence_count = 0;
    double total_seconds = 0.0;  // sum over the dataset of per-length means
    double sentences_per_second = 0.0;
    std::vector<LengthStats> per_length;
    std::vector<BenchTrial> trials;
};

// Score matrix with every consumed entry (h != d, d >= 1) i.i.d. uniform on
// [0, 1); column 0 and the diagonal stay zero. Deterministic given the seed.
ScoreMatrix generate_random_scores(int n, uint64_t seed);

// Times decode calls only: matrices are pre-generated, one warm-up decode per
// length is excluded, and validity checking (when enabled) runs outside the
// timed region. lengths is the dataset: one entry per sentence, repeats
// meaning multiple sentences of that length.
BenchReport benchmark(const std::string& decoder, const std::vector<int>& lengths,
                      int trials_per_length, uint64_t seed, bool validate_outputs = false);

// Sentence lengths of a CoNLL-U file, in order.
std::vector<int> lengths_from_corpus(const std::string& path);

// Rows "decoder,n,trial,seconds" followed by a '#'-prefixed summary block.
void write_benchmark_csv(std::ostream& out, const BenchReport& report);

}  // namespace arcparse
