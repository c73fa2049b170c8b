#pragma once

#include "rosetta/compile/pattern.hpp"
#include "rosetta/lambda/eval.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace rosetta::compile {

/// Closed λ-terms for every symbol of a valid rewrite system.
///
/// Functions are compiled through the fixpoint family. Rule bodies are
/// wrapped as λvars.λD.body and the matcher's result is applied to the
/// identity, so no body is evaluated before its row is selected. A nullary
/// function takes one dummy argument.
class CompiledSystem {
public:
    /// Throws rosetta::Error if `sys` fails validation.
    explicit CompiledSystem(trs::RewriteSystem sys);

    const trs::RewriteSystem& system() const { return sys_; }
    const ScottContext& scott() const { return scott_; }

    const lambda::Term& constructor(std::size_t i) const { return constructors_.at(i); }
    const lambda::Term& function(std::size_t i) const { return functions_.at(i); }
    const std::vector<lambda::Term>& fixpoints() const { return fixpoints_; }

    /// Compositional translation: constructors and functions by their terms.
    lambda::Term compile_term(const trs::Term& t) const;
    /// Same, but maximal constructor subterms are Scott-encoded directly.
    lambda::Term compile_input(const trs::Term& t) const;

    std::optional<double> k() const { return k_; }
    void set_k(double k) { k_ = k; }

private:
    lambda::Term translate(const trs::Term& t, bool encode_data) const;

    trs::RewriteSystem sys_;
    ScottContext scott_;
    std::vector<lambda::Term> constructors_;
    std::vector<lambda::Term> functions_;
    std::vector<lambda::Term> fixpoints_;
    std::optional<double> k_;
};

/// The compiled term of function i (0-based).
lambda::Term compile_function(const trs::RewriteSystem& sys, std::size_t i);

struct TranslationOptions {
    std::uint64_t fuel = 100000;              // first-order steps
    std::uint64_t lambda_fuel = 50'000'000;   // λ steps when no bound applies
    std::optional<double> k;                  // overrides the system's k
    bool bounded = true;                      // false: ignore k entirely
};

struct TranslationReport {
    trs::Status status = trs::Status::ConstructorNF;
    std::uint64_t trs_steps = 0;   // n
    std::uint64_t lambda_steps = 0;
    bool lambda_ran = false;
    bool lambda_normal = false;
    std::uint64_t size = 0;        // |t|
    double ratio = 0;              // λ steps / (n |t|), 0 when n = 0
    trs::Term trs_result;
    lambda::Term lambda_result;
};

/// Runs `t` on both sides. Normal form v in n steps: the λ side must reach
/// enc(v) within k n |t| steps (any number when k is unknown). Deadlock: the
/// λ side must reach bottom. Fuel exhaustion: with a known k the λ side must
/// still be running after k fuel |t| steps. Throws SimulationMismatch.
TranslationReport verify_simulation(const CompiledSystem& cs, const trs::Term& t,
                                    const TranslationOptions& opt = {});

/// Largest observed ratio over inputs that normalize in at least one step.
double measure_k(const CompiledSystem& cs, std::span<const trs::Term> inputs, std::uint64_t fuel = 100000);

} // namespace rosetta::compile
