#include "arcparse/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace arcparse {

namespace {

const std::string kPadSurface = "<pad>";
const std::string kRootSurface = "<root>";
const std::string kUnkSurface = "<unk>";
const std::string kNumSentinel = "<num>";

bool is_numeric_token(const std::string& form) {
    std::size_t start = 0;
    if (!form.empty() && (form[0] == '+' || form[0] == '-')) start = 1;
    if (start >= form.size()) return false;
    bool has_digit = false;
    for (std::size_t i = start; i < form.size(); ++i) {
        const char c = form[i];
        if (c >= '0' && c <= '9') {
            has_digit = true;
        } else if (c != ',' && c != '.') {
            return false;
        }
    }
    return has_digit;
}

}  // namespace

std::string normalize(const std::string& form, const NormalizeOptions& opts) {
    if (opts.number_sentinel && is_numeric_token(form)) return kNumSentinel;
    if (!opts.lowercase) return form;
    std::string out = form;
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

Vocabulary::StringMap::StringMap() {
    surfaces = {kPadSurface, kRootSurface, kUnkSurface};
    to_id = {{kPadSurface, kPad}, {kRootSurface, kRoot}, {kUnkSurface, kUnk}};
}

int32_t Vocabulary::StringMap::add(const std::string& surface) {
    const auto [it, inserted] = to_id.try_emplace(surface, static_cast<int32_t>(surfaces.size()));
    if (inserted) surfaces.push_back(surface);
    return it->second;
}

int32_t Vocabulary::StringMap::lookup(const std::string& surface) const {
    const auto it = to_id.find(surface);
    return it == to_id.end() ? kUnk : it->second;
}

const std::string& Vocabulary::StringMap::surface(int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= surfaces.size()) {
        throw std::out_of_range("vocabulary id " + std::to_string(id) + " out of range");
    }
    return surfaces[id];
}

Vocabulary Vocabulary::fit(const std::vector<Sentence>& sentences, int min_frequency,
                           const std::set<std::string>* pretrained_forms,
                           const NormalizeOptions& normalization) {
    if (sentences.empty()) throw std::invalid_argument("vocabulary fit: empty training set");
    if (min_frequency < 1) throw std::invalid_argument("vocabulary fit: min_frequency must be >= 1");

    Vocabulary vocab;
    vocab.normalization_ = normalization;
    vocab.min_frequency_ = min_frequency;

    std::set<std::string> pretrained;
    if (pretrained_forms) {
        for (const std::string& form : *pretrained_forms) {
            pretrained.insert(normalize(form, normalization));
        }
    }

    // First-occurrence scan fixes id assignment deterministically.
    std::unordered_map<std::string, int> frequency;
    std::vector<std::string> order;
    for (const Sentence& sentence : sentences) {
        for (const Token& token : sentence.tokens) {
            const std::string norm = normalize(token.form, normalization);
            if (++frequency[norm] == 1) order.push_back(norm);
        }
    }
    for (const std::string& form : order) {
        if (frequency[form] >= min_frequency || pretrained.count(form)) {
            vocab.forms_.add(form);
        }
    }
    for (const std::string& form : pretrained) {  // std::set iterates sorted
        vocab.forms_.add(form);
    }

    for (const Sentence& sentence : sentences) {
        for (const Token& token : sentence.tokens) {
            vocab.upos_.add(token.upos);
            vocab.deprels_.add(token.deprel);
        }
    }
    return vocab;
}

EncodedSentence Vocabulary::encode(const Sentence& sentence) const {
    EncodedSentence enc;
    const int n = sentence.size();
    enc.length = n;
    enc.word_ids.reserve(n + 1);
    enc.upos_ids.reserve(n + 1);
    enc.word_ids.push_back(kRoot);
    enc.upos_ids.push_back(kRoot);
    for (const Token& token : sentence.tokens) {
        enc.word_ids.push_back(form_id(token.form));
        enc.upos_ids.push_back(upos_.lookup(token.upos));
        enc.gold_heads.push_back(token.head);
        enc.gold_label_ids.push_back(deprels_.lookup(token.deprel));
    }
    return enc;
}

int32_t Vocabulary::form_id(const std::string& raw_form) const {
    return forms_.lookup(normalize(raw_form, normalization_));
}

int32_t Vocabulary::upos_id(const std::string& tag) const { return upos_.lookup(tag); }

int32_t Vocabulary::deprel_id(const std::string& label) const { return deprels_.lookup(label); }

std::vector<std::string> Vocabulary::deprel_inventory() const {
    return {deprels_.surfaces.begin() + 3, deprels_.surfaces.end()};
}

namespace {

void save_section(std::ostream& out, const char* name,
                  const std::vector<std::string>& surfaces) {
    out << '[' << name << "]\n";
    for (std::size_t id = 0; id < surfaces.size(); ++id) {
        out << id << '\t' << surfaces[id] << '\n';
    }
}

}  // namespace

void Vocabulary::save(std::ostream& out) const {
    out << "[options]\n";
    out << "lowercase\t" << (normalization_.lowercase ? 1 : 0) << '\n';
    out << "number_sentinel\t" << (normalization_.number_sentinel ? 1 : 0) << '\n';
    out << "min_frequency\t" << min_frequency_ << '\n';
    save_section(out, "forms", forms_.surfaces);
    save_section(out, "upos", upos_.surfaces);
    save_section(out, "deprel", deprels_.surfaces);
}

void Vocabulary::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save(out);
}

Vocabulary Vocabulary::load(std::istream& in) {
    Vocabulary vocab;
    StringMap* current = nullptr;
    bool in_options = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "[options]") {
            in_options = true;
            current = nullptr;
            continue;
        }
        if (line == "[forms]" || line == "[upos]" || line == "[deprel]") {
            in_options = false;
            current = line == "[forms]" ? &vocab.forms_
                      : line == "[upos]" ? &vocab.upos_
                                         : &vocab.deprels_;
            continue;
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("vocabulary line " + std::to_string(line_no) +
                                     ": expected <key>\\t<value>");
        }
        const std::string key = line.substr(0, tab);
        const std::string value = line.substr(tab + 1);
        if (in_options) {
            if (key == "lowercase") vocab.normalization_.lowercase = value == "1";
            else if (key == "number_sentinel") vocab.normalization_.number_sentinel = value == "1";
            else if (key == "min_frequency") vocab.min_frequency_ = std::stoi(value);
            continue;
        }
        if (!current) {
            throw std::runtime_error("vocabulary line " + std::to_string(line_no) +
                                     ": entry before any section header");
        }
        const int32_t id = static_cast<int32_t>(std::stol(key));
        const int32_t assigned = current->add(value);
        if (assigned != id) {
            throw std::runtime_error("vocabulary line " + std::to_string(line_no) +
                                     ": non-contiguous id " + key);
        }
    }
    return vocab;
}

Vocabulary Vocabulary::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load(in);
}

}  // namespace arcparse
