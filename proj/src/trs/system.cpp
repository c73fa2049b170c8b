#include "rosetta/trs/system.hpp"

#include "rosetta/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace rosetta::trs {

namespace {

const Symbol* find_in(const std::vector<Symbol>& symbols, const std::string& name) {
    for (const auto& s : symbols)
        if (s.name == name) return &s;
    return nullptr;
}

std::size_t index_in(const std::vector<Symbol>& symbols, const std::string& name) {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i].name == name) return i;
    return Signature::npos;
}

} // namespace

const Symbol* Signature::find_constructor(const std::string& name) const {
    return find_in(constructors, name);
}
const Symbol* Signature::find_function(const std::string& name) const {
    return find_in(functions, name);
}
std::size_t Signature::constructor_index(const std::string& name) const {
    return index_in(constructors, name);
}
std::size_t Signature::function_index(const std::string& name) const {
    return index_in(functions, name);
}

std::vector<std::size_t> RewriteSystem::rules_for(const std::string& function) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i].head == function) out.push_back(i);
    return out;
}

const char* to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::DuplicateSymbol: return "duplicate-symbol";
    case ViolationKind::UnknownSymbol: return "unknown-symbol";
    case ViolationKind::ArityMismatch: return "arity-mismatch";
    case ViolationKind::NotConstructorPattern: return "not-constructor-pattern";
    case ViolationKind::NonLeftLinear: return "non-left-linear";
    case ViolationKind::UnboundRhsVariable: return "unbound-rhs-variable";
    case ViolationKind::Overlap: return "overlap";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
    case Status::ConstructorNF: return "ConstructorNF";
    case Status::Deadlock: return "Deadlock";
    case Status::FuelExhausted: return "FuelExhausted";
    }
    return "?";
}

namespace {

void check_symbols(const Signature& sig, const Term& t, std::size_t rule,
                   std::vector<Violation>& out) {
    if (t.is_var()) return;
    const Symbol* s = t.is_function() ? sig.find_function(t.name()) : sig.find_constructor(t.name());
    if (!s) {
        out.push_back({ViolationKind::UnknownSymbol, {rule},
                       "rule " + std::to_string(rule) + ": undeclared " +
                           (t.is_function() ? "function " : "constructor ") + t.name()});
    } else if (s->arity != t.arity()) {
        out.push_back({ViolationKind::ArityMismatch, {rule},
                       "rule " + std::to_string(rule) + ": " + t.name() + " expects " +
                           std::to_string(s->arity) + " arguments"});
    }
    for (const auto& a : t.args()) check_symbols(sig, a, rule, out);
}

void count_vars(const Term& t, std::map<std::string, int>& seen) {
    if (t.is_var()) {
        ++seen[t.name()];
        return;
    }
    for (const auto& a : t.args()) count_vars(a, seen);
}

} // namespace

bool unifiable(const Term& p, const Term& q) {
    if (p.is_var() || q.is_var()) return true;
    if (p.name() != q.name() || p.arity() != q.arity()) return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!unifiable(p.arg(i), q.arg(i))) return false;
    return true;
}

std::vector<Violation> validate(const RewriteSystem& sys) {
    std::vector<Violation> out;
    const Signature& sig = sys.signature;

    std::set<std::string> names;
    for (const auto* group : {&sig.constructors, &sig.functions})
        for (const auto& s : *group)
            if (!names.insert(s.name).second)
                out.push_back({ViolationKind::DuplicateSymbol, {}, "symbol declared twice: " + s.name});

    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        const Rule& r = sys.rules[i];
        const std::string tag = "rule " + std::to_string(i) + ": ";
        const Symbol* head = sig.find_function(r.head);
        if (!head) {
            out.push_back({ViolationKind::UnknownSymbol, {i}, tag + "head " + r.head + " is not a function"});
        } else if (head->arity != r.lhs_args.size()) {
            out.push_back({ViolationKind::ArityMismatch, {i},
                           tag + r.head + " expects " + std::to_string(head->arity) + " arguments"});
        }
        std::map<std::string, int> lhs_vars;
        for (const auto& p : r.lhs_args) {
            if (p.has_function())
                out.push_back({ViolationKind::NotConstructorPattern, {i},
                               tag + "left-hand side argument contains a function symbol"});
            check_symbols(sig, p, i, out);
            count_vars(p, lhs_vars);
        }
        for (const auto& [x, n] : lhs_vars)
            if (n > 1)
                out.push_back({ViolationKind::NonLeftLinear, {i}, tag + "variable " + x + " repeated"});
        if (!r.rhs) continue;
        check_symbols(sig, r.rhs, i, out);
        for (const auto& x : vars(r.rhs))
            if (!lhs_vars.contains(x))
                out.push_back({ViolationKind::UnboundRhsVariable, {i}, tag + "variable " + x + " unbound"});
    }

    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        for (std::size_t j = i + 1; j < sys.rules.size(); ++j) {
            const Rule& a = sys.rules[i];
            const Rule& b = sys.rules[j];
            if (a.head != b.head || a.lhs_args.size() != b.lhs_args.size()) continue;
            bool overlap = true;
            for (std::size_t k = 0; k < a.lhs_args.size() && overlap; ++k)
                overlap = unifiable(a.lhs_args[k], b.lhs_args[k]);
            if (overlap)
                out.push_back({ViolationKind::Overlap, {i, j},
                               "rules " + std::to_string(i) + " and " + std::to_string(j) + " overlap"});
        }
    }
    return out;
}

namespace {

bool match_into(const Term& pattern, const Term& subject, Substitution& s) {
    if (pattern.is_var()) {
        if (!subject.is_constructor_term()) return false;
        if (const Term* prior = lookup(s, pattern.name())) return *prior == subject;
        s.emplace_back(pattern.name(), subject);
        return true;
    }
    if (subject.is_var() || pattern.name() != subject.name() ||
        pattern.is_function() != subject.is_function() || pattern.arity() != subject.arity())
        return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match_into(pattern.arg(i), subject.arg(i), s)) return false;
    return true;
}

std::optional<Firing> search(const Term& t, Path& path, const Contractor& contract) {
    if (!t.has_function()) return std::nullopt;
    bool args_function_free = true;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        const Term& a = t.arg(i);
        if (!a.has_function()) continue;
        args_function_free = false;
        path.push_back(i);
        auto fired = search(a, path, contract);
        path.pop_back();
        if (fired) {
            std::vector<Term> args = t.args();
            args[i] = std::move(fired->result);
            fired->result = Term::node(t.name(), t.is_function(), std::move(args));
            return fired;
        }
    }
    if (!t.is_function() || !args_function_free) return std::nullopt;
    if (auto r = contract(t)) return Firing{std::move(r->first), path, r->second};
    return std::nullopt;
}

using RuleIndex = std::unordered_map<std::string, std::vector<std::size_t>>;

RuleIndex index_rules(const RewriteSystem& sys) {
    RuleIndex idx;
    for (std::size_t i = 0; i < sys.rules.size(); ++i) idx[sys.rules[i].head].push_back(i);
    return idx;
}

std::optional<std::pair<Term, std::size_t>> fire_rules(const RewriteSystem& sys,
                                                       const std::vector<std::size_t>& candidates,
                                                       const Term& t) {
    for (auto i : candidates) {
        const Rule& r = sys.rules[i];
        if (auto s = match_args(r.lhs_args, t.args())) return std::pair{instantiate(r.rhs, *s), i};
    }
    return std::nullopt;
}

void collect_redexes(const RewriteSystem& sys, const RuleIndex& idx, const Term& t, Path& path,
                     std::vector<Path>& out) {
    if (!t.has_function()) return;
    if (t.is_function()) {
        auto it = idx.find(t.name());
        if (it != idx.end() && fire_rules(sys, it->second, t)) out.push_back(path);
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(i);
        collect_redexes(sys, idx, t.arg(i), path, out);
        path.pop_back();
    }
}

} // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
    Substitution s;
    if (!match_into(pattern, subject, s)) return std::nullopt;
    return s;
}

std::optional<Substitution> match_args(const std::vector<Term>& patterns,
                                       const std::vector<Term>& subjects) {
    if (patterns.size() != subjects.size()) return std::nullopt;
    Substitution s;
    for (std::size_t i = 0; i < patterns.size(); ++i)
        if (!match_into(patterns[i], subjects[i], s)) return std::nullopt;
    return s;
}

std::optional<Firing> step_with(const Term& t, const Contractor& contract) {
    Path path;
    return search(t, path, contract);
}

Contractor rule_contractor(const RewriteSystem& sys) {
    auto idx = std::make_shared<RuleIndex>(index_rules(sys));
    return [&sys, idx](const Term& t) -> std::optional<std::pair<Term, std::size_t>> {
        auto it = idx->find(t.name());
        if (it == idx->end()) return std::nullopt;
        return fire_rules(sys, it->second, t);
    };
}

std::optional<Firing> step(const RewriteSystem& sys, const Term& t) {
    return step_with(t, rule_contractor(sys));
}

Outcome normalize_with(const Term& t, const Contractor& contract, std::uint64_t fuel,
                       const FiringObserver& observer) {
    Outcome out{t, 0, Status::ConstructorNF};
    while (true) {
        auto fired = step_with(out.result, contract);
        if (!fired) break;
        if (out.steps == fuel) {
            out.status = Status::FuelExhausted;
            return out;
        }
        out.result = fired->result;
        ++out.steps;
        if (observer) observer(out.steps, *fired);
    }
    out.status = out.result.has_function() ? Status::Deadlock : Status::ConstructorNF;
    return out;
}

Outcome normalize(const RewriteSystem& sys, const Term& t, std::uint64_t fuel,
                  const FiringObserver& observer) {
    return normalize_with(t, rule_contractor(sys), fuel, observer);
}

std::vector<Path> redexes(const RewriteSystem& sys, const Term& t) {
    auto idx = index_rules(sys);
    std::vector<Path> out;
    Path path;
    collect_redexes(sys, idx, t, path, out);
    return out;
}

Firing contract_at(const RewriteSystem& sys, const Term& t, const Path& p) {
    const Term& sub = at(t, p);
    if (sub.is_var() || !sub.is_function()) throw Error("no redex at the requested position");
    auto fired = fire_rules(sys, sys.rules_for(sub.name()), sub);
    if (!fired) throw Error("no redex at the requested position");
    return Firing{replace_at(t, p, std::move(fired->first)), p, fired->second};
}

std::size_t matching_rules(const RewriteSystem& sys, const Term& t) {
    if (t.is_var() || !t.is_function()) return 0;
    std::size_t n = 0;
    for (const auto& r : sys.rules)
        if (r.head == t.name() && match_args(r.lhs_args, t.args())) ++n;
    return n;
}

} // namespace rosetta::trs
