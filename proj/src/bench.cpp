#include "arcparse/bench.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "arcparse/conllu.hpp"
#include "arcparse/decoders.hpp"
#include "arcparse/rng.hpp"

namespace arcparse {

ScoreMatrix generate_random_scores(int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_random_scores: n must be >= 1");
    ScoreMatrix S(n);
    SplitMix64 rng(seed);
    for (int h = 0; h <= n; ++h) {
        for (int d = 1; d <= n; ++d) {
            if (h != d) S.at(h, d) = rng.next_double();
        }
    }
    return S;
}

BenchReport benchmark(const std::string& decoder, const std::vector<int>& lengths,
                      int trials_per_length, uint64_t seed, bool validate_outputs) {
    if (trials_per_length < 3) {
        throw std::invalid_argument("benchmark: trials_per_length must be >= 3");
    }
    const DecoderFn decode = decoder_by_name(decoder);
    const bool check_projective = decoder.rfind("eisner", 0) == 0;

    std::map<int, uint64_t> counts;  // distinct lengths, ascending
    for (const int n : lengths) {
        if (n < 1) throw std::invalid_argument("benchmark: sentence length must be >= 1");
        ++counts[n];
    }

    BenchReport report;
    report.decoder = decoder;
    for (const auto& [n, count] : counts) {
        std::vector<ScoreMatrix> matrices;
        matrices.reserve(trials_per_length);
        for (int trial = 0; trial < trials_per_length; ++trial) {
            matrices.push_back(generate_random_scores(
                n, derive_seed(seed, (static_cast<uint64_t>(n) << 20) + trial)));
        }

        const DependencyTree warmup = decode(matrices[0]);  // excluded from timing
        (void)warmup;

        LengthStats stats;
        stats.n = n;
        stats.trials = trials_per_length;
        std::vector<DependencyTree> outputs;
        outputs.reserve(trials_per_length);
        double sum = 0.0;
        for (int trial = 0; trial < trials_per_length; ++trial) {
            const auto started = std::chrono::steady_clock::now();
            DependencyTree tree = decode(matrices[trial]);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();
            sum += seconds;
            report.trials.push_back({n, trial, seconds});
            outputs.push_back(std::move(tree));
        }
        stats.mean_seconds = sum / trials_per_length;
        double sq = 0.0;
        for (int trial = 0; trial < trials_per_length; ++trial) {
            const double d =
                report.trials[report.trials.size() - trials_per_length + trial].seconds -
                stats.mean_seconds;
            sq += d * d;
        }
        stats.stddev_seconds = std::sqrt(sq / (trials_per_length - 1));

        if (validate_outputs) {
            for (const DependencyTree& tree : outputs) {
                const std::string violation = tree_violation(tree.heads);
                if (!violation.empty()) {
                    throw ValidationError("benchmark: decoder '" + decoder +
                                          "' produced an invalid tree at n=" + std::to_string(n) +
                                          ": " + violation);
                }
                if (check_projective && !is_projective(tree.heads)) {
                    throw ValidationError("benchmark: projective decoder '" + decoder +
                                          "' produced crossing arcs at n=" + std::to_string(n));
                }
            }
        }

        report.per_length.push_back(stats);
        report.sentence_count += count;
        report.total_seconds += stats.mean_seconds * static_cast<double>(count);
    }

    report.sentences_per_second =
        report.total_seconds > 0.0
            ? static_cast<double>(report.sentence_count) / report.total_seconds
            : 0.0;
    return report;
}

std::vector<int> lengths_from_corpus(const std::string& path) {
    std::vector<int> lengths;
    for (const Sentence& sentence : read_conllu_file(path)) {
        lengths.push_back(sentence.size());
    }
    return lengths;
}

void write_benchmark_csv(std::ostream& out, const BenchReport& report) {
    out << "decoder,n,trial,seconds\n";
    for (const BenchTrial& trial : report.trials) {
        out << report.decoder << ',' << trial.n << ',' << trial.trial << ',' << trial.seconds
            << '\n';
    }
    out << "# summary\n";
    out << "# decoder,n,trials,mean_seconds,stddev_seconds\n";
    for (const LengthStats& stats : report.per_length) {
        out << "# " << report.decoder << ',' << stats.n << ',' << stats.trials << ','
            << stats.mean_seconds << ',' << stats.stddev_seconds << '\n';
    }
    out << "# sentences," << report.sentence_count << '\n';
    out << "# total_seconds," << report.total_seconds << '\n';
    out << "# sentences_per_second," << report.sentences_per_second << '\n';
}

}  // namespace arcparse
