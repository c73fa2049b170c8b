#include "rosetta/lambda/eval.hpp"

#include "rosetta/error.hpp"

namespace rosetta::lambda {

namespace {

Term beta(const Term& redex) {
    return substitute(redex.fun().body(), redex.fun().name(), redex.arg());
}

void collect(const Term& m, Path& here, std::vector<Path>& out) {
    if (!m.is_app()) return;
    if (m.fun().is_abs() && m.arg().is_value()) out.push_back(here);
    here.push_back(Side::Fun);
    collect(m.fun(), here, out);
    here.back() = Side::Arg;
    collect(m.arg(), here, out);
    here.pop_back();
}

Term contract_from(const Term& m, const Path& p, std::size_t i) {
    if (i == p.size()) {
        if (!m.is_app() || !m.fun().is_abs() || !m.arg().is_value())
            throw Error("no CBV redex at the requested position");
        return beta(m);
    }
    if (!m.is_app()) throw Error("position leaves the application spine");
    if (p[i] == Side::Fun) return Term::app(contract_from(m.fun(), p, i + 1), m.arg());
    return Term::app(m.fun(), contract_from(m.arg(), p, i + 1));
}

} // namespace

std::optional<Term> step_cbv(const Term& m) {
    if (!m.is_app()) return std::nullopt;
    if (auto f = step_cbv(m.fun())) return Term::app(std::move(*f), m.arg());
    if (auto a = step_cbv(m.arg())) return Term::app(m.fun(), std::move(*a));
    if (m.fun().is_abs() && m.arg().is_value()) return beta(m);
    return std::nullopt;
}

std::optional<Term> step_cbn(const Term& m) {
    if (!m.is_app()) return std::nullopt;
    if (m.fun().is_abs()) return beta(m);
    if (auto f = step_cbn(m.fun())) return Term::app(std::move(*f), m.arg());
    return std::nullopt;
}

std::optional<Term> step(const Term& m, Strategy s) {
    return s == Strategy::CBV ? step_cbv(m) : step_cbn(m);
}

EvalOutcome normalize(const Term& m, Strategy s, std::uint64_t fuel, const StepObserver& observer) {
    EvalOutcome out{m, 0, Status::NormalForm};
    while (true) {
        auto next = step(out.result, s);
        if (!next) return out;
        if (out.steps == fuel) {
            out.status = Status::FuelExhausted;
            return out;
        }
        out.result = std::move(*next);
        ++out.steps;
        if (observer) observer(out.steps, out.result);
    }
}

std::vector<Path> cbv_redexes(const Term& m) {
    std::vector<Path> out;
    Path here;
    collect(m, here, out);
    return out;
}

Term contract_at(const Term& m, const Path& p) { return contract_from(m, p, 0); }

} // namespace rosetta::lambda
