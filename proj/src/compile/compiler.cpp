#include "rosetta/compile/compiler.hpp"

#include "rosetta/error.hpp"
#include "rosetta/trs/syntax.hpp"

#include <cmath>
#include <unordered_map>

namespace rosetta::compile {

namespace {

using lambda::Term;

std::vector<std::string> names(char prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

void pattern_variables(const trs::Term& p, std::vector<std::string>& out) {
    if (p.is_var()) {
        out.push_back(p.name());
        return;
    }
    for (const auto& a : p.args()) pattern_variables(a, out);
}

} // namespace

CompiledSystem::CompiledSystem(trs::RewriteSystem sys) : sys_(std::move(sys)), scott_(sys_.signature) {
    if (auto v = trs::validate(sys_); !v.empty()) throw Error("invalid rewrite system: " + v.front().message);

    const auto& sig = sys_.signature;
    for (std::size_t i = 0; i < scott_.g(); ++i) constructors_.push_back(compile_constructor(scott_, i));

    const std::size_t h = sig.functions.size();
    if (h == 0) return;
    fixpoints_ = fixpoint_family(h);
    const auto fs = names('F', h);
    const Term failure = Term::abs("D", scott_.bottom());

    std::vector<Term> bodies;
    for (std::size_t i = 0; i < h; ++i) {
        const std::size_t ar = sig.functions[i].arity;
        std::vector<PatternRow> rows;
        std::vector<Term> args;
        const auto params = names('A', std::max<std::size_t>(ar, 1));
        for (std::size_t p = 0; p < ar; ++p) args.push_back(Term::var(params[p]));

        for (std::size_t r : sys_.rules_for(sig.functions[i].name)) {
            const auto& rule = sys_.rules[r];
            rows.push_back(rule.lhs_args);
            std::vector<std::string> xs;
            for (const auto& p : rule.lhs_args) pattern_variables(p, xs);
            const auto ps = names('P', xs.size());
            std::unordered_map<std::string, std::string> rename;
            for (std::size_t l = 0; l < xs.size(); ++l) rename.emplace(xs[l], ps[l]);

            // Rule body with calls routed through the fixpoint variables.
            auto body = [&](auto&& self, const trs::Term& t) -> Term {
                if (t.is_var()) return Term::var(rename.at(t.name()));
                std::vector<Term> sub;
                for (const auto& a : t.args()) sub.push_back(self(self, a));
                if (!t.is_function()) return Term::apps(constructors_[sig.constructor_index(t.name())], sub);
                const Term f = Term::var(fs[sig.function_index(t.name())]);
                return sub.empty() ? Term::app(f, identity()) : Term::apps(f, sub);
            };
            args.push_back(Term::lams(ps, Term::abs("D", body(body, rule.rhs))));
        }
        args.push_back(identity());
        Term matcher = compile_pattern_match(scott_, rows, ar, failure);
        bodies.push_back(Term::lams(fs, Term::lams(std::span(params).first(std::max<std::size_t>(ar, 1)),
                                                   Term::apps(matcher, args))));
    }
    for (std::size_t i = 0; i < h; ++i) functions_.push_back(Term::apps(fixpoints_[i], bodies));
}

Term CompiledSystem::translate(const trs::Term& t, bool encode_data) const {
    if (t.is_var()) return Term::var(t.name());
    const auto& sig = sys_.signature;
    if (!t.is_function()) {
        if (encode_data && !t.has_var()) return scott_.encode(t);
        const std::size_t i = sig.constructor_index(t.name());
        if (i == trs::Signature::npos) throw Error("unknown constructor " + t.name());
        std::vector<Term> sub;
        for (const auto& a : t.args()) sub.push_back(translate(a, encode_data));
        return Term::apps(constructors_[i], sub);
    }
    const std::size_t i = sig.function_index(t.name());
    if (i == trs::Signature::npos) throw Error("unknown function " + t.name());
    std::vector<Term> sub;
    for (const auto& a : t.args()) sub.push_back(translate(a, encode_data));
    return sub.empty() ? Term::app(functions_[i], identity()) : Term::apps(functions_[i], sub);
}

Term CompiledSystem::compile_term(const trs::Term& t) const { return translate(t, false); }
Term CompiledSystem::compile_input(const trs::Term& t) const {
    if (!t.is_function() && !t.has_function() && !t.has_var()) return scott_.encode(t);
    return translate(t, true);
}

lambda::Term compile_function(const trs::RewriteSystem& sys, std::size_t i) { return CompiledSystem(sys).function(i); }

TranslationReport verify_simulation(const CompiledSystem& cs, const trs::Term& t, const TranslationOptions& opt) {
    if (!t.closed()) throw Error("input term must be closed");
    TranslationReport rep;
    const auto first = trs::normalize(cs.system(), t, opt.fuel);
    rep.status = first.status;
    rep.trs_steps = first.steps;
    rep.trs_result = first.result;
    rep.size = t.length();

    const std::optional<double> k = !opt.bounded ? std::nullopt : opt.k ? opt.k : cs.k();
    const Term m = cs.compile_input(t);
    auto run = [&](std::uint64_t fuel) {
        auto out = lambda::normalize(m, lambda::Strategy::CBV, fuel);
        rep.lambda_ran = true;
        rep.lambda_steps = out.steps;
        rep.lambda_normal = out.status == lambda::Status::NormalForm;
        rep.lambda_result = out.result;
    };
    auto budget = [&](std::uint64_t n) {
        return static_cast<std::uint64_t>(std::floor(*k * static_cast<double>(n) * static_cast<double>(rep.size)));
    };

    switch (first.status) {
    case trs::Status::ConstructorNF: {
        run(k ? budget(first.steps) : opt.lambda_fuel);
        if (!rep.lambda_normal)
            throw SimulationMismatch(rep.lambda_steps, k ? "λ side exceeded k·n·|t| steps" : "λ side ran out of fuel");
        if (!(rep.lambda_result == cs.scott().encode(first.result)))
            throw SimulationMismatch(rep.lambda_steps, "λ result is not the encoding of " + trs::to_string(first.result));
        if (first.steps > 0)
            rep.ratio = static_cast<double>(rep.lambda_steps) /
                        (static_cast<double>(first.steps) * static_cast<double>(rep.size));
        break;
    }
    case trs::Status::Deadlock:
        run(opt.lambda_fuel);
        if (!rep.lambda_normal || !cs.scott().is_bottom(rep.lambda_result))
            throw SimulationMismatch(rep.lambda_steps, "stuck first-order term did not compile to bottom");
        break;
    case trs::Status::FuelExhausted:
        if (k) {
            run(budget(opt.fuel));
            if (rep.lambda_normal) throw SimulationMismatch(rep.lambda_steps, "λ side normalized within k·fuel·|t|");
        }
        break;
    }
    return rep;
}

double measure_k(const CompiledSystem& cs, std::span<const trs::Term> inputs, std::uint64_t fuel) {
    double k = 0;
    TranslationOptions opt;
    opt.fuel = fuel;
    opt.bounded = false;
    for (const auto& t : inputs) {
        auto rep = verify_simulation(cs, t, opt);
        if (rep.status == trs::Status::ConstructorNF && rep.trs_steps > 0) k = std::max(k, rep.ratio);
    }
    return k;
}

} // namespace rosetta::compile
