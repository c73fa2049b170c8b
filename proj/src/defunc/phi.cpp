#include "rosetta/defunc/phi.hpp"

#include "rosetta/defunc/syntax.hpp"
#include "rosetta/error.hpp"
#include "rosetta/lambda/eval.hpp"

#include <algorithm>
#include <unordered_set>

namespace rosetta::defunc {

namespace {

class Encoder {
public:
    explicit Encoder(Registry& reg) : reg_(reg) {}

    trs::Term operator()(const lambda::Term& m) {
        auto it = memo_.find(m.identity());
        if (it != memo_.end()) return it->second;
        trs::Term out;
        switch (m.kind()) {
        case lambda::Kind::Var:
            out = trs::Term::var(m.name());
            break;
        case lambda::Kind::Abs: {
            const auto& c = reg_.intern(m.name(), m.body());
            std::vector<trs::Term> args;
            args.reserve(c.arity());
            for (const auto& x : c.params) args.push_back(trs::Term::var(x));
            out = trs::Term::constructor(c.symbol, std::move(args));
            break;
        }
        case lambda::Kind::App:
            out = trs::Term::function(kApp, {(*this)(m.fun()), (*this)(m.arg())});
            break;
        }
        memo_.emplace(m.identity(), out);
        return out;
    }

private:
    Registry& reg_;
    std::unordered_map<const void*, trs::Term> memo_;
};

bool canonical_rec(const trs::Term& t, std::unordered_set<const void*>& good) {
    if (!t.has_function()) return true;
    if (good.contains(t.identity())) return true;
    if (!t.is_function() || t.name() != kApp || t.arity() != 2) return false;
    if (!canonical_rec(t.arg(0), good) || !canonical_rec(t.arg(1), good)) return false;
    good.insert(t.identity());
    return true;
}

void gather(const trs::Term& t, const Registry& reg, std::unordered_set<const void*>& seen,
            std::vector<std::size_t>& out) {
    if (t.is_var() || !seen.insert(t.identity()).second) return;
    if (!t.is_function()) {
        if (const auto* c = reg.find(t.name()))
            if (std::find(out.begin(), out.end(), c->index) == out.end()) out.push_back(c->index);
    }
    for (const auto& a : t.args()) gather(a, reg, seen, out);
}

} // namespace

trs::Term encode(const lambda::Term& m, Registry& reg) { return Encoder(reg)(m); }

lambda::Term Readback::operator()(const trs::Term& t) {
    if (t.is_var()) return lambda::Term::var(t.name());
    auto it = memo_.find(t.identity());
    if (it != memo_.end()) return it->second;
    lambda::Term out;
    if ((t.name() == kApp || t.name() == kCapp) && t.arity() == 2) {
        lambda::Term f = (*this)(t.arg(0));
        out = lambda::Term::app(std::move(f), (*this)(t.arg(1)));
    } else {
        const ClosureConstructor* c = reg_->find(t.name());
        if (!c) throw Error("cannot read back symbol " + t.name());
        if (c->arity() != t.arity())
            throw Error(t.name() + " expects " + std::to_string(c->arity()) + " arguments");
        std::vector<std::pair<std::string, lambda::Term>> bindings;
        bindings.reserve(c->arity());
        for (std::size_t i = 0; i < c->arity(); ++i) bindings.emplace_back(c->params[i], (*this)(t.arg(i)));
        out = lambda::substitute(c->abstraction, bindings);
    }
    memo_.emplace(t.identity(), out);
    keep_alive_.push_back(t);
    return out;
}

lambda::Term readback(const trs::Term& t, const Registry& reg) {
    Readback rb(reg);
    return rb(t);
}

bool readback_equals(Readback& rb, lambda::EqualityMemo& eq, const trs::Term& t, const lambda::Term& m) {
    if (rb.size() > kMemoLimit) rb.clear();
    if (eq.size() > kMemoLimit) eq.clear();
    return eq.equal(rb(t), m);
}

bool phi_canonical(const trs::Term& t) {
    std::unordered_set<const void*> good;
    return canonical_rec(t, good);
}

trs::Contractor phi_contractor(Registry& reg) {
    return [&reg](const trs::Term& t) -> std::optional<std::pair<trs::Term, std::size_t>> {
        if (t.name() != kApp || t.arity() != 2) return std::nullopt;
        const trs::Term& closure = t.arg(0);
        const trs::Term& value = t.arg(1);
        if (closure.is_var() || closure.is_function() || !value.is_constructor_term()) return std::nullopt;
        const ClosureConstructor* c = reg.find(closure.name());
        if (!c || c->arity() != closure.arity()) return std::nullopt;
        trs::Substitution s;
        s.reserve(c->arity() + 1);
        for (std::size_t i = 0; i < c->arity(); ++i) s.emplace_back(c->params[i], closure.arg(i));
        s.emplace_back(c->binder, value);
        return std::pair{trs::instantiate(reg.phi_rhs(*c), s), c->index};
    };
}

std::optional<trs::Firing> phi_fire(const trs::Term& t, Registry& reg) {
    return trs::step_with(t, phi_contractor(reg));
}

std::optional<trs::Term> phi_step(const trs::Term& t, Registry& reg) {
    auto f = phi_fire(t, reg);
    if (!f) return std::nullopt;
    return std::move(f->result);
}

namespace {

// Matching positions on both sides: the sibling kept aside while the focus
// is evaluated, and whether the focus is the argument.
struct CbvFrame {
    bool in_arg;
    lambda::Term lam_other;
    trs::Term phi_other;
};

bool is_app_node(const trs::Term& t) { return t.is_function() && t.name() == kApp && t.arity() == 2; }

trs::Term phi_app(trs::Term u, trs::Term v) { return trs::Term::function(kApp, {std::move(u), std::move(v)}); }

lambda::Term plug_lambda(lambda::Term t, const std::vector<CbvFrame>& stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
        t = it->in_arg ? lambda::Term::app(it->lam_other, std::move(t)) : lambda::Term::app(std::move(t), it->lam_other);
    return t;
}

trs::Term plug_phi(trs::Term t, const std::vector<CbvFrame>& stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
        t = it->in_arg ? phi_app(it->phi_other, std::move(t)) : phi_app(std::move(t), it->phi_other);
    return t;
}

} // namespace

CbvReport simulate_cbv(const lambda::Term& m, Registry& reg, const SimulationOptions& opt) {
    Readback rb(reg);
    lambda::EqualityMemo eq;
    const auto contract = phi_contractor(reg);

    CbvReport rep;
    lambda::Term lam = m;
    trs::Term phi = encode(m, reg);
    const bool start_ok = readback_equals(rb, eq, phi, lam);
    if (opt.record) rep.rows.push_back({0, phi, lam, start_ok});
    if (!start_ok) throw SimulationMismatch(0, "readback of the encoding differs from the source");

    // Both foci move together; each side decides with its own predicates and
    // any disagreement is a mismatch. Only contracta are compared, which
    // suffices because every frame pairs readback-equal siblings.
    std::vector<CbvFrame> stack;
    std::uint64_t k = 0;
    while (true) {
        bool redex = false;
        while (true) {
            const bool lam_app = lam.is_app();
            if (lam_app != is_app_node(phi))
                throw SimulationMismatch(k + 1, lam_app ? "λ side has a redex, first-order side does not"
                                                        : "first-order side is not canonical");
            if (!lam_app) {
                if (phi.has_function()) throw SimulationMismatch(k + 1, "first-order side is not canonical");
                if (stack.empty()) break;
                CbvFrame f = std::move(stack.back());
                stack.pop_back();
                if (f.in_arg) {
                    lam = lambda::Term::app(std::move(f.lam_other), std::move(lam));
                    phi = phi_app(std::move(f.phi_other), std::move(phi));
                } else {
                    lam = lambda::Term::app(std::move(lam), std::move(f.lam_other));
                    phi = phi_app(std::move(phi), std::move(f.phi_other));
                }
                continue;
            }
            const bool lam_fun = !lam.fun().is_value();
            if (lam_fun != phi.arg(0).has_function())
                throw SimulationMismatch(k + 1, "evaluation positions differ in the function part");
            if (lam_fun) {
                stack.push_back({false, lam.arg(), phi.arg(1)});
                lam = lambda::Term(lam.fun());
                phi = trs::Term(phi.arg(0));
                continue;
            }
            const bool lam_arg = !lam.arg().is_value();
            if (lam_arg != phi.arg(1).has_function())
                throw SimulationMismatch(k + 1, "evaluation positions differ in the argument part");
            if (lam_arg) {
                stack.push_back({true, lam.fun(), phi.arg(0)});
                lam = lambda::Term(lam.arg());
                phi = trs::Term(phi.arg(1));
                continue;
            }
            redex = true;
            break;
        }
        if (!redex) {
            rep.normal = true;
            break;
        }
        if (k == opt.fuel) break;
        if (!lam.fun().is_abs()) throw SimulationMismatch(k + 1, "λ side is stuck");
        auto fired = contract(phi);
        if (!fired) throw SimulationMismatch(k + 1, "no first-order rule applies");
        ++k;
        lam = lambda::substitute(lam.fun().body(), lam.fun().name(), lam.arg());
        phi = std::move(fired->first);
        const bool ok = readback_equals(rb, eq, phi, lam);
        if (opt.record) rep.rows.push_back({k, plug_phi(phi, stack), plug_lambda(lam, stack), ok});
        if (!ok) throw SimulationMismatch(k, "readback differs from the λ state");
    }
    rep.lambda_steps = rep.phi_steps = k;
    rep.lambda_result = plug_lambda(lam, stack);
    rep.phi_result = plug_phi(phi, stack);
    return rep;
}

std::vector<std::size_t> constructors_in(const std::vector<trs::Term>& terms, const Registry& reg) {
    std::unordered_set<const void*> seen;
    std::vector<std::size_t> out;
    for (const auto& t : terms) gather(t, reg, seen, out);
    std::sort(out.begin(), out.end());
    return out;
}

bool check_subterm_property(const lambda::Term& m, const std::vector<trs::Term>& terms,
                            const Registry& reg) {
    const auto subs = lambda::subterms(m);
    const std::unordered_set<lambda::Term> pool(subs.begin(), subs.end());
    for (auto k : constructors_in(terms, reg))
        if (!pool.contains(reg.at(k).body)) return false;
    return true;
}

std::string dump_rules(const std::vector<std::size_t>& constructors, Registry& reg) {
    std::string out;
    for (auto k : constructors) {
        const auto& c = reg.at(k);
        std::vector<trs::Term> args;
        for (const auto& x : c.params) args.push_back(trs::Term::var(x));
        trs::Term lhs = trs::Term::function(
            kApp, {trs::Term::constructor(c.symbol, std::move(args)), trs::Term::var(c.binder)});
        out += to_string(lhs, reg) + " -> " + to_string(reg.phi_rhs(c), reg) + "\n";
    }
    return out;
}

} // namespace rosetta::defunc
