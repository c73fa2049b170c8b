#pragma once

#include "rosetta/lambda/term.hpp"
#include "rosetta/trs/system.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rosetta::verify {

struct NamedTerm {
    std::string name;
    lambda::Term term;
};

struct NamedSystem {
    std::string name;
    trs::RewriteSystem system;
};

/// Bundled inputs: every *.lam file holds one closed λ-term, every *.trs
/// file one rewrite system. Entries are sorted by file name.
struct Corpus {
    std::vector<NamedTerm> terms;
    std::vector<NamedSystem> systems;

    const NamedSystem* system(const std::string& name) const;
    const NamedTerm* term(const std::string& name) const;
};

/// Throws rosetta::Error if the directory is missing, ParseError on bad files.
Corpus load_corpus(const std::filesystem::path& dir);

/// Directory of the corpus shipped with the sources; $ROSETTA_CORPUS overrides it.
std::filesystem::path default_corpus_dir();

std::string read_file(const std::filesystem::path& path);

} // namespace rosetta::verify
