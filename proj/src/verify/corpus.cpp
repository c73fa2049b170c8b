#include "rosetta/verify/corpus.hpp"

#include "rosetta/error.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rosetta::verify {

const NamedSystem* Corpus::system(const std::string& name) const {
    for (const auto& s : systems)
        if (s.name == name) return &s;
    return nullptr;
}

const NamedTerm* Corpus::term(const std::string& name) const {
    for (const auto& t : terms)
        if (t.name == name) return &t;
    return nullptr;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Corpus load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error("corpus directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());

    Corpus out;
    for (const auto& p : files) {
        const auto ext = p.extension().string();
        if (ext == ".lam") {
            auto m = lambda::parse(read_file(p));
            if (!m.closed()) throw Error(p.filename().string() + ": term is not closed");
            out.terms.push_back({p.stem().string(), std::move(m)});
        } else if (ext == ".trs") {
            out.systems.push_back({p.stem().string(), trs::parse_system(read_file(p))});
        }
    }
    return out;
}

std::filesystem::path default_corpus_dir() {
    if (const char* env = std::getenv("ROSETTA_CORPUS"); env && *env) return env;
#ifdef ROSETTA_DEFAULT_CORPUS
    return ROSETTA_DEFAULT_CORPUS;
#else
    return "corpus";
#endif
}

} // namespace rosetta::verify
