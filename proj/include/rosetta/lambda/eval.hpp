#pragma once

#include "rosetta/lambda/term.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace rosetta::lambda {

enum class Strategy { CBV, CBN };
enum class Status { NormalForm, FuelExhausted };

struct EvalOutcome {
    Term result;
    std::uint64_t steps = 0;
    Status status = Status::NormalForm;
};

/// Weak call-by-value, left-first: reduce the function part, then the
/// argument, then fire the beta redex if the argument is a value.
std::optional<Term> step_cbv(const Term& m);

/// Weak head reduction: (λx.M)N fires without evaluating N.
std::optional<Term> step_cbn(const Term& m);

std::optional<Term> step(const Term& m, Strategy s);

/// Called after every step with the step index (1-based) and the new term.
using StepObserver = std::function<void(std::uint64_t, const Term&)>;

EvalOutcome normalize(const Term& m, Strategy s, std::uint64_t fuel,
                      const StepObserver& observer = {});

// Redex positions, used to exercise the non-determinism of →ᵥ.

enum class Side : std::uint8_t { Fun, Arg };
using Path = std::vector<Side>;

/// Every CBV redex (λx.M)V not under an abstraction, in left-to-right order.
std::vector<Path> cbv_redexes(const Term& m);

/// Contract the beta redex at `p`. Throws rosetta::Error if none is there.
Term contract_at(const Term& m, const Path& p);

} // namespace rosetta::lambda
