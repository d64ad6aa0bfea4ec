#include "arcparse/evaluation.hpp"

#include <algorithm>
#include <iterator>
#include <string_view>

namespace arcparse {

namespace {

#include "unicode_punct.inc"

bool is_punct_codepoint(uint32_t cp) {
    const auto* begin = std::begin(kPunctRanges);
    const auto* end = std::end(kPunctRanges);
    const auto* it = std::upper_bound(begin, end, cp,
                                      [](uint32_t v, const uint32_t (&range)[2]) {
                                          return v < range[0];
                                      });
    return it != begin && cp <= (*(it - 1))[1];
}

// Decodes one UTF-8 codepoint starting at pos; returns 0xFFFFFFFF on
// malformed input (and advances by one byte so the scan terminates).
uint32_t decode_utf8(const std::string& s, std::size_t& pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        pos += 1;
        return b0;
    }
    int len = 0;
    uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        pos += 1;
        return 0xFFFFFFFF;
    }
    if (pos + len > s.size()) {
        pos += 1;
        return 0xFFFFFFFF;
    }
    for (int i = 1; i < len; ++i) {
        const unsigned char b = byte(pos + i);
        if ((b & 0xC0) != 0x80) {
            pos += 1;
            return 0xFFFFFFFF;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    pos += len;
    return cp;
}

}  // namespace

bool is_punctuation(const std::string& form) {
    if (form.empty()) return false;
    std::size_t pos = 0;
    while (pos < form.size()) {
        const uint32_t cp = decode_utf8(form, pos);
        if (cp == 0xFFFFFFFF || !is_punct_codepoint(cp)) return false;
    }
    return true;
}

bool labels_match(const std::string& predicted, const std::string& gold, bool prefix_mode) {
    if (!prefix_mode) return predicted == gold;
    const std::string_view p(predicted.data(), std::min(predicted.find(':'), predicted.size()));
    const std::string_view g(gold.data(), std::min(gold.find(':'), gold.size()));
    return p == g;
}

EvalResult evaluate(const std::vector<Sentence>& gold,
                    const std::vector<DependencyTree>& predicted, const EvalConfig& config) {
    if (gold.size() != predicted.size()) {
        throw ValidationError("evaluate: " + std::to_string(gold.size()) + " gold sentences vs " +
                              std::to_string(predicted.size()) + " predictions");
    }
    EvalResult result;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const Sentence& sent = gold[i];
        const DependencyTree& tree = predicted[i];
        if (tree.size() != sent.size()) {
            throw ValidationError("evaluate: sentence " + std::to_string(i + 1) + " has " +
                                  std::to_string(sent.size()) + " tokens but the prediction has " +
                                  std::to_string(tree.size()));
        }
        if (!tree.labels.empty() && tree.labels.size() != tree.heads.size()) {
            throw ValidationError("evaluate: sentence " + std::to_string(i + 1) +
                                  ": label count does not match head count");
        }
        for (int d = 1; d <= sent.size(); ++d) {
            const Token& token = sent.tokens[d - 1];
            if (config.ignore_punctuation && is_punctuation(token.form)) continue;
            ++result.total_arcs;
            if (tree.heads[d - 1] != token.head) continue;
            ++result.correct_arcs;
            const std::string& predicted_label = tree.labels.empty() ? "" : tree.labels[d - 1];
            if (labels_match(predicted_label, token.deprel, config.label_prefix_match)) {
                ++result.correct_labeled_arcs;
            }
        }
    }
    if (result.total_arcs == 0) {
        throw ValidationError("evaluate: no arcs left to score (empty input or all punctuation)");
    }
    result.uas = static_cast<double>(result.correct_arcs) / static_cast<double>(result.total_arcs);
    result.las =
        static_cast<double>(result.correct_labeled_arcs) / static_cast<double>(result.total_arcs);
    return result;
}

}  // namespace arcparse
