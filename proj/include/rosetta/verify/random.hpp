#pragma once

#include "rosetta/lambda/term.hpp"
#include "rosetta/trs/system.hpp"

#include <cstddef>
#include <random>

namespace rosetta::verify {

using Rng = std::mt19937_64;

struct TermShape {
    std::size_t max_size = 40;
    /// Only emit applications whose argument is a value.
    bool value_arguments = false;
};

/// Closed λ-term with length in [2, max_size], biased towards applications.
/// Binders come from a small pool, so shadowing happens regularly.
lambda::Term random_closed_term(Rng& rng, const TermShape& shape = {});

/// Term whose free variables are among `scope` (open-term properties).
lambda::Term random_term(Rng& rng, std::size_t size, const lambda::Names& scope);

struct SystemShape {
    std::size_t max_constructors = 3;
    std::size_t max_functions = 2;
    std::size_t max_arity = 2;
    std::size_t max_splits = 3;
};

/// Valid, terminating OCRS. Patterns come from random case-split trees
/// (so rows never overlap); some rows are dropped to create deadlocks.
/// Calls to the same function recurse on strictly smaller pattern variables,
/// calls to later functions are unrestricted.
trs::RewriteSystem random_system(Rng& rng, const SystemShape& shape = {});

trs::Term random_constructor_term(Rng& rng, const trs::Signature& sig, std::size_t depth);

/// Closed term headed by a random function applied to constructor terms,
/// occasionally with a nested call.
trs::Term random_call(Rng& rng, const trs::Signature& sig, std::size_t depth);

} // namespace rosetta::verify
