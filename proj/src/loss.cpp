#include "arcparse/loss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcparse {

namespace {

void check_lengths(const ScoreMatrix& S, const DependencyTree& tree, const char* who) {
    if (tree.size() != S.n) {
        throw ValidationError(std::string(who) + ": tree length " + std::to_string(tree.size()) +
                              " does not match score matrix n=" + std::to_string(S.n));
    }
}

}  // namespace

LossOutput arc_hinge(const ScoreMatrix& S, const DependencyTree& gold, double margin) {
    check_lengths(S, gold, "arc_hinge");
    LossOutput out;
    out.grad = ScoreMatrix(S.n);
    for (int d = 1; d <= S.n; ++d) {
        const int gold_head = gold.heads[d - 1];
        double best = -std::numeric_limits<double>::infinity();
        int best_h = -1;
        for (int h = 0; h <= S.n; ++h) {
            if (h == d || h == gold_head) continue;
            if (S.at(h, d) > best) {
                best = S.at(h, d);
                best_h = h;
            }
        }
        if (best_h < 0) continue;  // no competitor exists (n == 1)
        const double term = margin + best - S.at(gold_head, d);
        if (term > 0.0) {
            out.value += term;
            out.grad.at(best_h, d) += 1.0;
            out.grad.at(gold_head, d) -= 1.0;
        }
    }
    return out;
}

LossOutput structured_hinge(const ScoreMatrix& S, const DependencyTree& predicted,
                            const DependencyTree& gold, double margin) {
    check_lengths(S, gold, "structured_hinge");
    check_lengths(S, predicted, "structured_hinge");
    int hamming = 0;
    double gap = 0.0;
    for (int d = 1; d <= S.n; ++d) {
        const int hp = predicted.heads[d - 1];
        const int hg = gold.heads[d - 1];
        if (hp != hg) {
            ++hamming;
            gap += S.at(hp, d) - S.at(hg, d);
        }
    }
    LossOutput out;
    out.grad = ScoreMatrix(S.n);
    const double value = margin * hamming + gap;
    if (value > 0.0) {
        out.value = value;
        for (int d = 1; d <= S.n; ++d) {
            out.grad.at(predicted.heads[d - 1], d) += 1.0;
            out.grad.at(gold.heads[d - 1], d) -= 1.0;
        }
    }
    return out;
}

LossOutput head_cross_entropy(const ScoreMatrix& S, const DependencyTree& gold) {
    check_lengths(S, gold, "head_cross_entropy");
    LossOutput out;
    out.grad = ScoreMatrix(S.n);
    for (int d = 1; d <= S.n; ++d) {
        double max_score = -std::numeric_limits<double>::infinity();
        for (int h = 0; h <= S.n; ++h) {
            if (h == d) continue;
            const double v = S.at(h, d);
            if (!std::isfinite(v)) {
                throw ValidationError("head_cross_entropy: non-finite score at (" +
                                      std::to_string(h) + ", " + std::to_string(d) + ")");
            }
            max_score = std::max(max_score, v);
        }
        double norm = 0.0;
        for (int h = 0; h <= S.n; ++h) {
            if (h != d) norm += std::exp(S.at(h, d) - max_score);
        }
        const double log_norm = max_score + std::log(norm);
        out.value += log_norm - S.at(gold.heads[d - 1], d);
        for (int h = 0; h <= S.n; ++h) {
            if (h == d) continue;
            out.grad.at(h, d) += std::exp(S.at(h, d) - log_norm);
        }
        out.grad.at(gold.heads[d - 1], d) -= 1.0;
    }
    return out;
}

DecoderFn loss_augmented(DecoderFn decoder, const DependencyTree& gold, double margin) {
    std::vector<int> gold_heads = gold.heads;
    return [decoder = std::move(decoder), gold_heads, margin](const ScoreMatrix& S) {
        if (static_cast<int>(gold_heads.size()) != S.n) {
            throw ValidationError("loss_augmented: gold length does not match score matrix");
        }
        ScoreMatrix augmented = S;
        for (int d = 1; d <= S.n; ++d) {
            for (int h = 0; h <= S.n; ++h) {
                if (h != d && h != gold_heads[d - 1]) augmented.at(h, d) += margin;
            }
        }
        return decoder(augmented);
    };
}

LossFn loss_by_name(const std::string& name) {
    if (name == "hinge") {
        return [](const ScoreMatrix& S, const DependencyTree*, const DependencyTree& gold) {
            return arc_hinge(S, gold);
        };
    }
    if (name == "structured-hinge") {
        return [](const ScoreMatrix& S, const DependencyTree* predicted,
                  const DependencyTree& gold) {
            if (!predicted) {
                throw std::invalid_argument("structured-hinge requires a predicted tree");
            }
            return structured_hinge(S, *predicted, gold);
        };
    }
    if (name == "crossentropy") {
        return [](const ScoreMatrix& S, const DependencyTree*, const DependencyTree& gold) {
            return head_cross_entropy(S, gold);
        };
    }
    throw std::invalid_argument("unknown loss '" + name +
                                "' (known: hinge, structured-hinge, crossentropy)");
}

std::vector<std::string> loss_names() { return {"hinge", "structured-hinge", "crossentropy"}; }

}  // namespace arcparse
