#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcparse {

// One CoNLL-U token line. Unset columns hold "_" verbatim.
struct Token {
    int id = 0;  // 1-based position within the sentence
    std::string form;
    std::string lemma = "_";
    std::string upos = "_";
    std::string xpos = "_";
    std::string feats = "_";
    int head = 0;  // 0 = artificial root
    std::string deprel = "_";
    std::string deps = "_";
    std::string misc = "_";
};

struct Sentence {
    std::vector<Token> tokens;
    std::vector<std::string> comments;

    int size() const { return static_cast<int>(tokens.size()); }
};

// Decoder output: heads[d-1] is the head of token d, 0 meaning the root.
// labels may be empty for unlabeled output.
struct DependencyTree {
    std::vector<int> heads;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(heads.size()); }
};

// Arc scores over the complete digraph of a sentence with n tokens plus the
// artificial root at index 0. at(h, d) is the score of the arc h -> d.
// Column 0 and the diagonal are never consumed by decoders.
struct ScoreMatrix {
    int n = 0;
    std::vector<double> s;  // row-major (n+1) x (n+1)

    ScoreMatrix() = default;
    explicit ScoreMatrix(int n_) : n(n_), s(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0.0) {}

    double& at(int h, int d) { return s[static_cast<std::size_t>(h) * (n + 1) + d]; }
    double at(int h, int d) const { return s[static_cast<std::size_t>(h) * (n + 1) + d]; }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Checks that heads encodes a spanning arborescence rooted at 0: heads in
// range, no self-loops, acyclic, every token reachable from the root.
// Returns an empty string when valid, otherwise a description naming the
// offending tokens.
std::string tree_violation(const std::vector<int>& heads);

inline bool is_valid_tree(const std::vector<int>& heads) { return tree_violation(heads).empty(); }

// True when no two arcs cross (arcs drawn above the sentence, root included).
bool is_projective(const std::vector<int>& heads);

// Sum of arc scores of the tree under S.
double tree_score(const ScoreMatrix& S, const std::vector<int>& heads);

}  // namespace arcparse
