#pragma once

#include "rosetta/trs/term.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rosetta::trs {

struct Symbol {
    std::string name;
    std::size_t arity = 0;
};

/// Declaration order of constructors fixes their Scott index.
struct Signature {
    std::vector<Symbol> constructors;
    std::vector<Symbol> functions;

    const Symbol* find_constructor(const std::string& name) const;
    const Symbol* find_function(const std::string& name) const;
    /// 0-based declaration index, or npos.
    std::size_t constructor_index(const std::string& name) const;
    std::size_t function_index(const std::string& name) const;
    bool declares(const std::string& name) const {
        return find_constructor(name) || find_function(name);
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct Rule {
    std::string head;
    std::vector<Term> lhs_args;
    Term rhs;

    Term lhs() const { return Term::function(head, lhs_args); }
};

struct RewriteSystem {
    Signature signature;
    std::vector<Rule> rules;

    /// Indices of the rules whose head is `function`, in declaration order.
    std::vector<std::size_t> rules_for(const std::string& function) const;
};

enum class ViolationKind {
    DuplicateSymbol,
    UnknownSymbol,
    ArityMismatch,
    NotConstructorPattern,
    NonLeftLinear,
    UnboundRhsVariable,
    Overlap,
};

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> rules;
    std::string message;
};

const char* to_string(ViolationKind k);

/// Every violation of the orthogonal constructor discipline. Empty = valid.
std::vector<Violation> validate(const RewriteSystem& sys);

/// Do two linear patterns with disjoint variables unify?
bool unifiable(const Term& p, const Term& q);

/// Matcher of `pattern` against `subject` whose bindings are all
/// constructor terms; bindings are listed in left-to-right variable order.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// Like `match` on the argument tuples of a rule.
std::optional<Substitution> match_args(const std::vector<Term>& patterns,
                                       const std::vector<Term>& subjects);

enum class Status { ConstructorNF, Deadlock, FuelExhausted };
const char* to_string(Status s);

struct Firing {
    Term result;
    Path position;
    std::size_t rule = 0;
};

struct Outcome {
    Term result;
    std::uint64_t steps = 0;
    Status status = Status::ConstructorNF;
};

/// Rewrites a candidate redex (a function-headed node with function-free
/// arguments) or declines. The rule tag is reported back in Firing::rule.
using Contractor = std::function<std::optional<std::pair<Term, std::size_t>>(const Term&)>;

/// Leftmost-innermost step using an arbitrary contractor.
std::optional<Firing> step_with(const Term& t, const Contractor& contract);

/// Leftmost-innermost CBV step of a rule system.
std::optional<Firing> step(const RewriteSystem& sys, const Term& t);

using FiringObserver = std::function<void(std::uint64_t, const Firing&)>;

Outcome normalize_with(const Term& t, const Contractor& contract, std::uint64_t fuel,
                       const FiringObserver& observer = {});
Outcome normalize(const RewriteSystem& sys, const Term& t, std::uint64_t fuel,
                  const FiringObserver& observer = {});

/// Contractor firing the rules of `sys` (at most one matches per position).
Contractor rule_contractor(const RewriteSystem& sys);

/// All redex positions (any order of exploration), for confluence checks.
std::vector<Path> redexes(const RewriteSystem& sys, const Term& t);
/// Contract the redex at `p`; throws rosetta::Error if there is none.
Firing contract_at(const RewriteSystem& sys, const Term& t, const Path& p);

/// Number of rules matching at the root of t (orthogonality check).
std::size_t matching_rules(const RewriteSystem& sys, const Term& t);

} // namespace rosetta::trs
