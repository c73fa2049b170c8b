#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace rosetta::lambda {

enum class Kind : std::uint8_t { Var, Abs, App };

using Names = std::vector<std::string>;

namespace detail {
struct Node;
}

/// Immutable, structurally shared λ-term. Copies are cheap handle copies.
///
/// Every node caches its length |M|, a structural hash and its free
/// variables (sorted, duplicate-free), so that the evaluators can skip
/// closed subterms and compare large shared terms without unfolding them.
class Term {
public:
    Term() = default;

    static Term var(std::string name);
    static Term abs(std::string binder, Term body);
    static Term app(Term fun, Term arg);

    /// λx1.…λxn.body
    static Term lams(std::span<const std::string> binders, Term body);
    /// head a1 … an, left-associated.
    static Term apps(Term head, std::span<const Term> args);
    static Term apps(Term head, std::initializer_list<Term> args) {
        return apps(std::move(head), std::span<const Term>(args.begin(), args.size()));
    }

    explicit operator bool() const { return node_ != nullptr; }

    Kind kind() const;
    bool is_var() const { return kind() == Kind::Var; }
    bool is_abs() const { return kind() == Kind::Abs; }
    bool is_app() const { return kind() == Kind::App; }
    bool is_value() const { return kind() != Kind::App; }

    /// Variable name, or the binder of an abstraction.
    const std::string& name() const;
    const Term& body() const;
    const Term& fun() const;
    const Term& arg() const;

    /// |x| = 1, |λx.M| = |M| + 1, |M N| = |M| + |N| + 1; saturates at 2^64-1.
    std::uint64_t length() const;
    std::size_t hash() const;
    const Names& free_vars() const;
    bool closed() const { return free_vars().empty(); }

    const detail::Node* identity() const { return node_.get(); }

private:
    friend struct detail::Node;
    explicit Term(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
    Kind kind;
    std::string name;
    Term left;
    Term right;
    std::size_t hash = 0;
    std::uint64_t length = 0;
    std::shared_ptr<const Names> free;

    ~Node();
};
} // namespace detail

inline Kind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::body() const { return node_->left; }
inline const Term& Term::fun() const { return node_->left; }
inline const Term& Term::arg() const { return node_->right; }
inline std::uint64_t Term::length() const { return node_->length; }
inline std::size_t Term::hash() const { return node_->hash; }
inline const Names& Term::free_vars() const { return *node_->free; }

/// Syntactic equality (no α-identification).
bool operator==(const Term& a, const Term& b);

/// Syntactic equality that remembers every pair of nodes it has proven
/// equal. Paired evaluators compare successive, heavily shared terms; the
/// memo makes each comparison proportional to the newly built part.
class EqualityMemo {
public:
    bool equal(const Term& a, const Term& b);
    std::size_t size() const { return proven_.size(); }
    void clear() {
        proven_.clear();
        keep_alive_.clear();
    }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<const void*, const void*>& p) const;
    };
    std::unordered_set<std::pair<const void*, const void*>, PairHash> proven_;
    std::vector<Term> keep_alive_;
};

/// Free variables in the global (lexicographic) order.
inline const Names& free_vars(const Term& m) { return m.free_vars(); }

/// Number of free occurrences of x in m.
std::uint64_t occurrences(const Term& m, const std::string& x);

/// m{n/x}. Never renames; throws CaptureError if a free variable of n would
/// be captured by a binder on the way to a free occurrence of x.
Term substitute(const Term& m, const std::string& x, const Term& n);

/// Simultaneous substitution m{n1/x1,…,nk/xk}; same capture discipline.
Term substitute(const Term& m, std::span<const std::pair<std::string, Term>> bindings);

/// Every subterm of m (including m), duplicates removed.
std::vector<Term> subterms(const Term& m);

/// Structural comparison up to renaming of bound variables. Test support for
/// terms produced with different binder names.
bool alpha_equivalent(const Term& a, const Term& b);

} // namespace rosetta::lambda

template <>
struct std::hash<rosetta::lambda::Term> {
    std::size_t operator()(const rosetta::lambda::Term& t) const { return t.hash(); }
};
