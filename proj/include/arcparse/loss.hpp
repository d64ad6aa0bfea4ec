#pragma once

#include <functional>
#include <string>
#include <vector>

#include "arcparse/decoders.hpp"
#include "arcparse/types.hpp"

namespace arcparse {

// Scalar loss plus its subgradient with respect to the score matrix. The
// gradient follows the descent convention (callers subtract lr * grad) and is
// zero at column 0 and on the diagonal.
struct LossOutput {
    double value = 0.0;
    ScoreMatrix grad;
};

// Per-dependent margin loss: sum over dependents of
// max(0, margin + best competitor - gold arc score).
LossOutput arc_hinge(const ScoreMatrix& S, const DependencyTree& gold, double margin = 1.0);

// Tree-level hinge with Hamming cost:
// max(0, margin * hamming(y_p, y_g) + score(y_p) - score(y_g)).
LossOutput structured_hinge(const ScoreMatrix& S, const DependencyTree& predicted,
                            const DependencyTree& gold, double margin = 1.0);

// Per-dependent softmax over candidate heads, negative log-likelihood of the
// gold head. Throws on non-finite consumed scores.
LossOutput head_cross_entropy(const ScoreMatrix& S, const DependencyTree& gold);

// Wraps a decoder so that every non-gold arc is boosted by the margin before
// decoding; the returned tree is the hinge's argmax.
DecoderFn loss_augmented(DecoderFn decoder, const DependencyTree& gold, double margin = 1.0);

// Loss registry with the framework signature f(scores, y_p, y_g); y_p may be
// null for losses that do not need a predicted tree. Names: hinge,
// structured-hinge, crossentropy.
using LossFn =
    std::function<LossOutput(const ScoreMatrix&, const DependencyTree*, const DependencyTree&)>;
LossFn loss_by_name(const std::string& name);
std::vector<std::string> loss_names();

}  // namespace arcparse
