#include "arcparse/conllu.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arcparse {

namespace {

bool parse_int(const std::string& text, int& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

void split_tabs(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

void finish_sentence(Sentence& current, std::vector<int>& token_lines,
                     std::vector<Sentence>& sentences) {
    if (current.tokens.empty() && current.comments.empty()) return;
    if (current.tokens.empty()) {
        // Comment block with no token lines; nothing to keep.
        current = Sentence{};
        token_lines.clear();
        return;
    }
    const int n = current.size();
    for (int i = 0; i < n; ++i) {
        const Token& tok = current.tokens[i];
        if (tok.head > n) {
            throw ParseError(token_lines[i], "head " + std::to_string(tok.head) +
                                                 " out of range for sentence of length " +
                                                 std::to_string(n));
        }
    }
    sentences.push_back(std::move(current));
    current = Sentence{};
    token_lines.clear();
}

}  // namespace

std::vector<Sentence> read_conllu(std::istream& in) {
    std::vector<Sentence> sentences;
    Sentence current;
    std::vector<int> token_lines;  // source line of each kept token, for errors
    std::vector<std::string> cols;
    std::string line;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        if (line.empty()) {
            finish_sentence(current, token_lines, sentences);
            continue;
        }
        if (line[0] == '#') {
            current.comments.push_back(line);
            continue;
        }

        split_tabs(line, cols);
        if (cols.size() != 10) {
            throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                          std::to_string(cols.size()));
        }
        // Range ("1-2") and empty-node ("1.1") lines carry no basic tree arcs.
        if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) {
            continue;
        }

        Token tok;
        if (!parse_int(cols[0], tok.id) || tok.id < 1) {
            throw ParseError(line_no, "token id '" + cols[0] + "' is not a positive integer");
        }
        const int expected = current.size() + 1;
        if (tok.id != expected) {
            throw ParseError(line_no, "token id " + std::to_string(tok.id) + ", expected " +
                                          std::to_string(expected));
        }
        tok.form = cols[1];
        tok.lemma = cols[2];
        tok.upos = cols[3];
        tok.xpos = cols[4];
        tok.feats = cols[5];
        if (!parse_int(cols[6], tok.head) || tok.head < 0) {
            throw ParseError(line_no, "head '" + cols[6] + "' is not a non-negative integer");
        }
        if (tok.head == tok.id) {
            throw ParseError(line_no, "token " + std::to_string(tok.id) + " is its own head");
        }
        tok.deprel = cols[7];
        tok.deps = cols[8];
        tok.misc = cols[9];
        current.tokens.push_back(std::move(tok));
        token_lines.push_back(line_no);
    }
    finish_sentence(current, token_lines, sentences);
    return sentences;
}

std::vector<Sentence> read_conllu_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_conllu(in);
}

void write_conllu(std::ostream& out, const std::vector<Sentence>& sentences,
                  const std::vector<DependencyTree>* trees) {
    if (trees && trees->size() != sentences.size()) {
        throw ValidationError("predicted tree count " + std::to_string(trees->size()) +
                              " does not match sentence count " +
                              std::to_string(sentences.size()));
    }
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const Sentence& sent = sentences[i];
        const DependencyTree* tree = trees ? &(*trees)[i] : nullptr;
        if (tree && tree->size() != sent.size()) {
            throw ValidationError("sentence " + std::to_string(i + 1) + ": tree length " +
                                  std::to_string(tree->size()) + " does not match " +
                                  std::to_string(sent.size()) + " tokens");
        }
        for (const std::string& comment : sent.comments) {
            out << comment << '\n';
        }
        for (int d = 1; d <= sent.size(); ++d) {
            const Token& tok = sent.tokens[d - 1];
            const int head = tree ? tree->heads[d - 1] : tok.head;
            const std::string& deprel =
                tree ? (tree->labels.empty() ? "_" : tree->labels[d - 1]) : tok.deprel;
            out << tok.id << '\t' << tok.form << '\t' << tok.lemma << '\t' << tok.upos << '\t'
                << tok.xpos << '\t' << tok.feats << '\t' << head << '\t' << deprel << '\t'
                << tok.deps << '\t' << tok.misc << '\n';
        }
        out << '\n';
    }
}

void write_conllu_file(const std::string& path, const std::vector<Sentence>& sentences,
                       const std::vector<DependencyTree>* trees) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_conllu(out, sentences, trees);
}

DependencyTree gold_tree(const Sentence& sentence) {
    DependencyTree tree;
    tree.heads.reserve(sentence.tokens.size());
    tree.labels.reserve(sentence.tokens.size());
    for (const Token& tok : sentence.tokens) {
        tree.heads.push_back(tok.head);
        tree.labels.push_back(tok.deprel);
    }
    const std::string violation = tree_violation(tree.heads);
    if (!violation.empty()) {
        throw ValidationError("gold annotation is not a tree: " + violation);
    }
    return tree;
}

}  // namespace arcparse
