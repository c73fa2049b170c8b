#pragma once

#include "rosetta/defunc/phi.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rosetta::defunc {

// Call-by-name variant. Applications off the spine are frozen as the
// constructor capp; the administrative rule app(capp(x,y),z) ->
// app(app(x,y),z) thaws them once they reach the spine.

/// Every application becomes capp: a constructor term for closed m.
trs::Term encode_frozen(const lambda::Term& m, Registry& reg);
/// Spine applications become app, argument applications are frozen.
trs::Term encode_spine(const lambda::Term& m, Registry& reg);

/// Rule tags: 1..5 are the ordinary rules, 0 is the administrative rule.
constexpr std::size_t kAdministrative = 0;

struct PsiFiring {
    trs::Term result;
    std::size_t rule = kAdministrative;
    std::size_t depth = 0; // position on the spine, 0 = root
    bool administrative() const { return rule == kAdministrative; }
};

/// Contractor for the six rule schemas at one app node.
trs::Contractor psi_contractor(Registry& reg);

/// Fires the redex at the bottom of the app spine, if any.
std::optional<PsiFiring> psi_step(const trs::Term& t, Registry& reg);

/// Leftmost-innermost search anywhere in the term (not just the spine);
/// used to exhibit steps inside non-canonical terms.
std::optional<trs::Firing> psi_step_anywhere(const trs::Term& t, Registry& reg);

inline lambda::Term psi_readback(const trs::Term& t, const Registry& reg) { return readback(t, reg); }

/// Occurrences of app (function-free subterms are skipped).
std::uint64_t app_count(const trs::Term& t);

/// Closure constructor term, or app(u, v) with u canonical and v a constructor term.
bool psi_canonical(const trs::Term& t);
/// app(u, v) with v a constructor term and u semi-canonical or a constructor term.
bool psi_semi_canonical(const trs::Term& t);

struct CbnRow {
    std::uint64_t step = 0;        // Ψ step index
    std::uint64_t lambda_step = 0; // λ steps completed so far
    trs::Term psi_term;
    lambda::Term lambda_term;
    std::size_t rule = 0;
    std::uint64_t app_count = 0;
    bool aligned = true;
};

struct CbnReport {
    std::uint64_t lambda_steps = 0;  // n
    std::uint64_t psi_steps = 0;     // m, ordinary + administrative
    std::uint64_t administrative = 0;
    bool normal = false;
    lambda::Term lambda_result;
    trs::Term psi_result;
    std::vector<CbnRow> rows;
};

/// Pairs each head-reduction step with one ordinary Ψ step followed by the
/// administrative steps that restore canonicity. Checks, per block: the
/// readback advances by exactly one λ step and then stays put, each
/// administrative step adds one app, an ordinary step removes at most one
/// app; overall n <= m <= 2n on termination and
/// m <= 2n + #app(current) otherwise. Throws SimulationMismatch on failure.
CbnReport simulate_cbn(const lambda::Term& m, Registry& reg, const SimulationOptions& opt = {});

} // namespace rosetta::defunc
