#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "arcparse/types.hpp"

namespace arcparse {

struct NormalizeOptions {
    bool lowercase = true;
    bool number_sentinel = true;

    bool operator==(const NormalizeOptions&) const = default;
};

// Token cleanup applied before vocabulary lookups: ASCII lowercasing and the
// "<num>" sentinel for purely numeric tokens (digits, commas, periods, with
// an optional sign; at least one digit). Either step can be disabled.
std::string normalize(const std::string& form, const NormalizeOptions& opts = {});

// Sentence encoded against a frozen vocabulary. Position 0 of the id arrays
// is the artificial root.
struct EncodedSentence {
    std::vector<int32_t> word_ids;        // length n+1
    std::vector<int32_t> upos_ids;        // length n+1
    std::vector<int32_t> gold_heads;      // length n
    std::vector<int32_t> gold_label_ids;  // length n
    int length = 0;
};

// Frozen token/POS/label <-> id maps. Ids 0..2 are reserved (PAD, ROOT, UNK)
// in every map; real entries start at 3 in first-occurrence order. Instances
// are immutable once fit() returns and safe to share across threads.
class Vocabulary {
public:
    static constexpr int32_t kPad = 0;
    static constexpr int32_t kRoot = 1;
    static constexpr int32_t kUnk = 2;

    // Builds the maps over a training treebank. Forms are normalized first
    // and kept when their frequency reaches min_frequency or when they appear
    // in pretrained_forms (which is normalized on intake; pretrained forms
    // absent from the data are appended in lexicographic order). All observed
    // upos tags and deprels get ids unconditionally.
    static Vocabulary fit(const std::vector<Sentence>& sentences, int min_frequency = 2,
                          const std::set<std::string>* pretrained_forms = nullptr,
                          const NormalizeOptions& normalization = {});

    EncodedSentence encode(const Sentence& sentence) const;

    int32_t form_id(const std::string& raw_form) const;  // normalizes, UNK when absent
    int32_t upos_id(const std::string& tag) const;
    int32_t deprel_id(const std::string& label) const;

    const std::string& form(int32_t id) const { return forms_.surface(id); }
    const std::string& upos(int32_t id) const { return upos_.surface(id); }
    const std::string& deprel(int32_t id) const { return deprels_.surface(id); }

    std::size_t form_count() const { return forms_.size(); }
    std::size_t upos_count() const { return upos_.size(); }
    std::size_t deprel_count() const { return deprels_.size(); }

    // Non-special deprels in id order; the label inventory of the parser.
    std::vector<std::string> deprel_inventory() const;

    const NormalizeOptions& normalization() const { return normalization_; }
    int min_frequency() const { return min_frequency_; }

    // Plain-text serialization: sections [options], [forms], [upos],
    // [deprel]; one "<id>\t<surface>" entry per line.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static Vocabulary load(std::istream& in);
    static Vocabulary load_file(const std::string& path);

private:
    struct StringMap {
        std::unordered_map<std::string, int32_t> to_id;
        std::vector<std::string> surfaces;

        StringMap();
        int32_t add(const std::string& surface);  // idempotent
        int32_t lookup(const std::string& surface) const;
        const std::string& surface(int32_t id) const;
        std::size_t size() const { return surfaces.size(); }
    };

    StringMap forms_;
    StringMap upos_;
    StringMap deprels_;
    NormalizeOptions normalization_;
    int min_frequency_ = 2;
};

}  // namespace arcparse
