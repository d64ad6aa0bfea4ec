#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcparse/types.hpp"

namespace arcparse {

struct EvalConfig {
    // Drop arcs whose dependent token is punctuation from all counts.
    bool ignore_punctuation = false;
    // Match only the label component before the first ':' (obl vs obl:tmod).
    bool label_prefix_match = false;
};

struct EvalResult {
    double uas = 0.0;
    double las = 0.0;
    int64_t correct_arcs = 0;
    int64_t correct_labeled_arcs = 0;
    int64_t total_arcs = 0;
};

// True iff the form is non-empty and every codepoint has Unicode general
// category P*. The form is decoded as UTF-8; malformed bytes count as
// non-punctuation.
bool is_punctuation(const std::string& form);

bool labels_match(const std::string& predicted, const std::string& gold, bool prefix_mode);

// Micro-averaged attachment scores over all arcs of the corpus. Throws
// ValidationError on sentence/length mismatches and when every arc is
// excluded (the metric is undefined, not zero).
EvalResult evaluate(const std::vector<Sentence>& gold,
                    const std::vector<DependencyTree>& predicted, const EvalConfig& config = {});

}  // namespace arcparse
