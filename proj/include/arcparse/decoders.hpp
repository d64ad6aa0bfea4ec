#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "arcparse/types.hpp"

namespace arcparse {

// First-order decoders. All of them treat column 0 and the diagonal of the
// score matrix as -inf internally; callers need not pre-mask. Throw
// std::invalid_argument on n = 0.

// Maximum projective spanning tree via the complete/incomplete span dynamic
// program, O(n^3) time and O(n^2) space. Flat-buffer overload takes a
// row-major (n+1)x(n+1) score buffer.
DependencyTree eisner(const ScoreMatrix& S);
DependencyTree eisner(std::span<const double> scores, int n);

// Maximum spanning arborescence rooted at 0 (greedy best-incoming selection,
// cycle contraction, expansion). With single_root, exactly one token attaches
// to the root: the unrestricted optimum is kept when it already qualifies,
// otherwise the decoder is re-run once per candidate root child with the
// other root arcs masked and the best result wins.
DependencyTree cle(const ScoreMatrix& S, bool single_root = false);
DependencyTree cle(std::span<const double> scores, int n, bool single_root = false);

// Straightforward unoptimized implementations with the same contracts,
// retained as speed baselines and cross-checks.
DependencyTree eisner_reference(const ScoreMatrix& S);
DependencyTree cle_reference(const ScoreMatrix& S, bool single_root = false);

struct BruteForceResult {
    std::vector<int> heads;
    double score = 0.0;
};

// Exhaustive argmax over all valid head assignments (spanning arborescences;
// additionally projective when projective_only). Ties are broken by the
// lexicographically smallest head array. Enumeration bound: n <= 8.
BruteForceResult brute_force_best(const ScoreMatrix& S, bool projective_only);

using DecoderFn = std::function<DependencyTree(const ScoreMatrix&)>;

// Registry: eisner, cle, eisner-reference, cle-reference. Throws
// std::invalid_argument for unknown names.
DecoderFn decoder_by_name(const std::string& name);
std::vector<std::string> decoder_names();

}  // namespace arcparse
