#pragma once

// Reference first-order rewriter: big-step innermost evaluation with its own
// matcher, counting rule applications. Independent of rosetta::trs::step.

#include "rosetta/trs/system.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace oracle {

using rosetta::trs::RewriteSystem;
using rosetta::trs::Term;

inline bool ref_constructor_only(const Term& t) {
    if (t.is_var() || t.is_function()) return false;
    for (const auto& a : t.args())
        if (!ref_constructor_only(a)) return false;
    return true;
}

inline bool ref_match(const Term& p, const Term& s, std::map<std::string, Term>& env) {
    if (p.is_var()) {
        if (!ref_constructor_only(s)) return false;
        env[p.name()] = s;
        return true;
    }
    if (s.is_var() || s.name() != p.name() || s.arity() != p.arity()) return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!ref_match(p.arg(i), s.arg(i), env)) return false;
    return true;
}

inline Term ref_plug(const Term& t, const std::map<std::string, Term>& env) {
    if (t.is_var()) return env.at(t.name());
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(ref_plug(a, env));
    return Term::node(t.name(), t.is_function(), args);
}

struct RefResult {
    Term value;
    std::uint64_t steps = 0;
    bool out_of_fuel = false;
};

// Innermost: normalize arguments, then try the root; repeat on the contractum.
inline Term ref_eval(const RewriteSystem& sys, const Term& t, std::uint64_t& steps,
                     std::uint64_t fuel, bool& out_of_fuel) {
    if (t.is_var() || out_of_fuel) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(ref_eval(sys, a, steps, fuel, out_of_fuel));
    Term cur = Term::node(t.name(), t.is_function(), args);
    if (out_of_fuel || !cur.is_function()) return cur;
    for (const auto& r : sys.rules) {
        if (r.head != cur.name() || r.lhs_args.size() != cur.arity()) continue;
        std::map<std::string, Term> env;
        bool ok = true;
        for (std::size_t i = 0; i < cur.arity() && ok; ++i) ok = ref_match(r.lhs_args[i], cur.arg(i), env);
        if (!ok) continue;
        if (steps == fuel) {
            out_of_fuel = true;
            return cur;
        }
        ++steps;
        return ref_eval(sys, ref_plug(r.rhs, env), steps, fuel, out_of_fuel);
    }
    return cur;
}

inline RefResult ref_normalize(const RewriteSystem& sys, const Term& t, std::uint64_t fuel) {
    RefResult r;
    r.value = ref_eval(sys, t, r.steps, fuel, r.out_of_fuel);
    return r;
}

} // namespace oracle
