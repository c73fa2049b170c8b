#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace rosetta::trs {

namespace detail {
struct Node;
}

/// Immutable first-order term: a variable or a symbol applied to arguments.
/// Each node records whether it is a function symbol, so terms can be
/// classified (constructor term, pattern, closed) without a signature.
class Term {
public:
    Term() = default;

    static Term var(std::string name);
    static Term node(std::string symbol, bool is_function, std::vector<Term> args = {});
    static Term constructor(std::string symbol, std::vector<Term> args = {}) {
        return node(std::move(symbol), false, std::move(args));
    }
    static Term function(std::string symbol, std::vector<Term> args = {}) {
        return node(std::move(symbol), true, std::move(args));
    }

    explicit operator bool() const { return node_ != nullptr; }

    bool is_var() const;
    /// Variable name or head symbol.
    const std::string& name() const;
    bool is_function() const;
    const std::vector<Term>& args() const;
    std::size_t arity() const { return args().size(); }
    const Term& arg(std::size_t i) const { return args()[i]; }

    /// Number of symbol occurrences (variables excluded); saturating.
    std::uint64_t length() const;
    std::size_t hash() const;
    bool has_function() const;
    bool has_var() const;

    bool closed() const { return !has_var(); }
    bool is_pattern() const { return !has_function(); }
    bool is_constructor_term() const { return !has_function() && !has_var(); }

    const detail::Node* identity() const { return node_.get(); }

private:
    friend struct detail::Node;
    explicit Term(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
    std::string name;
    std::vector<Term> args;
    bool is_var = false;
    bool is_function = false;
    bool has_function = false;
    bool has_var = false;
    std::size_t hash = 0;
    std::uint64_t length = 0;

    ~Node();
};
} // namespace detail

inline bool Term::is_var() const { return node_->is_var; }
inline const std::string& Term::name() const { return node_->name; }
inline bool Term::is_function() const { return node_->is_function; }
inline const std::vector<Term>& Term::args() const { return node_->args; }
inline std::uint64_t Term::length() const { return node_->length; }
inline std::size_t Term::hash() const { return node_->hash; }
inline bool Term::has_function() const { return node_->has_function; }
inline bool Term::has_var() const { return node_->has_var; }

bool operator==(const Term& a, const Term& b);

/// Equality that caches proven node pairs across calls (see the λ version).
class EqualityMemo {
public:
    bool equal(const Term& a, const Term& b);

private:
    struct PairHash {
        std::size_t operator()(const std::pair<const void*, const void*>& p) const;
    };
    std::unordered_set<std::pair<const void*, const void*>, PairHash> proven_;
    std::vector<Term> keep_alive_;
};

/// Occurrences of `symbol` in t (the |t|_f of the cost analysis).
std::uint64_t count(const Term& t, const std::string& symbol);

/// Variables in left-to-right order of first occurrence.
std::vector<std::string> vars(const Term& t);

using Path = std::vector<std::size_t>;

const Term& at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, std::size_t depth, Term replacement);
inline Term replace_at(const Term& t, const Path& p, Term replacement) {
    return replace_at(t, p, 0, std::move(replacement));
}

using Substitution = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const Substitution& s, const std::string& x);
Term instantiate(const Term& t, const Substitution& s);

} // namespace rosetta::trs

template <>
struct std::hash<rosetta::trs::Term> {
    std::size_t operator()(const rosetta::trs::Term& t) const { return t.hash(); }
};
