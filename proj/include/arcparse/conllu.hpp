#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arcparse/types.hpp"

namespace arcparse {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// Reads CoNLL-U text: UTF-8, 10 tab-separated columns, blank-line sentence
// separators, '#' comment lines. Multiword-token range lines ("1-2") and
// empty-node lines ("1.1") are skipped and not restored on write.
std::vector<Sentence> read_conllu(std::istream& in);
std::vector<Sentence> read_conllu_file(const std::string& path);

// Writes sentences back as CoNLL-U. When trees are given, the HEAD and DEPREL
// columns are overwritten per sentence from the corresponding tree; a tree
// without labels writes "_" for DEPREL. Throws ValidationError on a length
// mismatch.
void write_conllu(std::ostream& out, const std::vector<Sentence>& sentences,
                  const std::vector<DependencyTree>* trees = nullptr);
void write_conllu_file(const std::string& path, const std::vector<Sentence>& sentences,
                       const std::vector<DependencyTree>* trees = nullptr);

// Copies the gold heads and deprels of a sentence into a DependencyTree,
// throwing ValidationError when the annotation is not a well-formed
// arborescence.
DependencyTree gold_tree(const Sentence& sentence);

}  // namespace arcparse
