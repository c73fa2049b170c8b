#include "rosetta/defunc/psi.hpp"

#include "rosetta/error.hpp"
#include "rosetta/lambda/eval.hpp"

#include <unordered_map>

namespace rosetta::defunc {

namespace {

class Encoder {
public:
    Encoder(Registry& reg, bool spine) : reg_(reg), spine_(spine) {}

    trs::Term operator()(const lambda::Term& m) { return go(m, spine_); }

private:
    trs::Term go(const lambda::Term& m, bool on_spine) {
        auto& memo = on_spine ? spine_memo_ : frozen_memo_;
        auto it = memo.find(m.identity());
        if (it != memo.end()) return it->second;
        trs::Term out;
        switch (m.kind()) {
        case lambda::Kind::Var:
            out = trs::Term::var(m.name());
            break;
        case lambda::Kind::Abs: {
            const auto& c = reg_.intern(m.name(), m.body());
            std::vector<trs::Term> args;
            for (const auto& x : c.params) args.push_back(trs::Term::var(x));
            out = trs::Term::constructor(c.symbol, std::move(args));
            break;
        }
        case lambda::Kind::App: {
            trs::Term f = go(m.fun(), on_spine);
            trs::Term a = go(m.arg(), false);
            out = on_spine ? trs::Term::function(kApp, {std::move(f), std::move(a)})
                           : trs::Term::constructor(kCapp, {std::move(f), std::move(a)});
            break;
        }
        }
        memo.emplace(m.identity(), out);
        return out;
    }

    Registry& reg_;
    bool spine_;
    std::unordered_map<const void*, trs::Term> spine_memo_;
    std::unordered_map<const void*, trs::Term> frozen_memo_;
};

bool is_capp(const trs::Term& t) { return !t.is_var() && !t.is_function() && t.name() == kCapp && t.arity() == 2; }
bool is_app(const trs::Term& t) { return !t.is_var() && t.is_function() && t.name() == kApp && t.arity() == 2; }

using Contracted = std::optional<std::pair<trs::Term, std::size_t>>;

Contracted contract(Registry& reg, const trs::Term& t) {
    if (!is_app(t)) return std::nullopt;
    const trs::Term& head = t.arg(0);
    const trs::Term& arg = t.arg(1);
    if (head.is_var() || head.is_function() || !arg.is_constructor_term()) return std::nullopt;
    if (is_capp(head)) return std::pair{trs::Term::function(kApp, {trs::Term::function(kApp, head.args()), arg}), kAdministrative};

    const ClosureConstructor* c = reg.find(head.name());
    if (!c || c->arity() != head.arity()) return std::nullopt;
    const lambda::Term& body = c->body;
    if (body.is_var()) {
        // λz.z : identity. Arity 0.
        if (body.name() == c->binder) {
            if (is_capp(arg)) return std::pair{trs::Term::function(kApp, arg.args()), std::size_t{1}};
            if (reg.find(arg.name())) return std::pair{arg, std::size_t{2}};
            return std::nullopt;
        }
        // λz.w : constant function, the captured value is the single argument.
        const trs::Term& captured = head.arg(0);
        if (!captured.is_constructor_term()) return std::nullopt;
        if (is_capp(captured)) return std::pair{trs::Term::function(kApp, captured.args()), std::size_t{3}};
        if (reg.find(captured.name())) return std::pair{captured, std::size_t{4}};
        return std::nullopt;
    }
    trs::Substitution s;
    s.reserve(c->arity() + 1);
    for (std::size_t i = 0; i < c->arity(); ++i) s.emplace_back(c->params[i], head.arg(i));
    s.emplace_back(c->binder, arg);
    return std::pair{trs::instantiate(reg.psi_rhs(*c), s), std::size_t{5}};
}

bool constructor_term(const trs::Term& t) { return t.is_constructor_term(); }

} // namespace

std::uint64_t app_count(const trs::Term& t) {
    if (!t.has_function()) return 0;
    std::uint64_t n = is_app(t) ? 1 : 0;
    for (const auto& a : t.args()) n += app_count(a);
    return n;
}

trs::Term encode_frozen(const lambda::Term& m, Registry& reg) { return Encoder(reg, false)(m); }
trs::Term encode_spine(const lambda::Term& m, Registry& reg) { return Encoder(reg, true)(m); }

trs::Contractor psi_contractor(Registry& reg) {
    return [&reg](const trs::Term& t) { return contract(reg, t); };
}

std::optional<PsiFiring> psi_step(const trs::Term& t, Registry& reg) {
    std::vector<const trs::Term*> spine;
    const trs::Term* cur = &t;
    while (is_app(*cur)) {
        spine.push_back(cur);
        if (!is_app(cur->arg(0))) break;
        cur = &cur->arg(0);
    }
    if (spine.empty()) return std::nullopt;
    auto fired = contract(reg, *spine.back());
    if (!fired) return std::nullopt;
    PsiFiring out{std::move(fired->first), fired->second, spine.size() - 1};
    for (std::size_t i = spine.size() - 1; i-- > 0;)
        out.result = trs::Term::function(kApp, {std::move(out.result), spine[i]->arg(1)});
    return out;
}

std::optional<trs::Firing> psi_step_anywhere(const trs::Term& t, Registry& reg) {
    return trs::step_with(t, psi_contractor(reg));
}

bool psi_canonical(const trs::Term& t) {
    const trs::Term* cur = &t;
    while (!constructor_term(*cur)) {
        if (!is_app(*cur) || !constructor_term(cur->arg(1))) return false;
        cur = &cur->arg(0);
    }
    return !is_capp(*cur);
}

bool psi_semi_canonical(const trs::Term& t) {
    if (!is_app(t)) return false;
    const trs::Term* cur = &t;
    while (is_app(*cur)) {
        if (!constructor_term(cur->arg(1))) return false;
        cur = &cur->arg(0);
    }
    return constructor_term(*cur);
}

namespace {

struct SpineFrame {
    lambda::Term lam_arg;
    trs::Term psi_arg;
};

lambda::Term plug_lambda(lambda::Term t, const std::vector<SpineFrame>& stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) t = lambda::Term::app(std::move(t), it->lam_arg);
    return t;
}

trs::Term plug_psi(trs::Term t, const std::vector<SpineFrame>& stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
        t = trs::Term::function(kApp, {std::move(t), it->psi_arg});
    return t;
}

} // namespace

CbnReport simulate_cbn(const lambda::Term& m, Registry& reg, const SimulationOptions& opt) {
    Readback rb(reg);
    lambda::EqualityMemo eq;
    CbnReport rep;

    lambda::Term lam = m;
    trs::Term psi = encode_spine(m, reg);
    if (!readback_equals(rb, eq, psi, lam)) throw SimulationMismatch(0, "readback of the encoding differs from the source");
    if (!psi_canonical(psi)) throw SimulationMismatch(0, "encoding is not canonical");
    if (opt.record) rep.rows.push_back({0, 0, psi, lam, 0, app_count(psi), true});

    // Both foci walk down the head spine together; spine arguments are
    // constructor terms, so the app count of the whole state is the stack
    // depth plus that of the focus.
    std::vector<SpineFrame> stack;
    std::uint64_t n = 0, total = 0;
    const auto apps_now = [&] { return stack.size() + app_count(psi); };
    while (true) {
        bool redex = false;
        while (true) {
            const bool lam_app = lam.is_app();
            if (lam_app != is_app(psi))
                throw SimulationMismatch(total + 1, lam_app ? "λ side has a redex, first-order side does not"
                                                            : "first-order side is not canonical");
            if (!lam_app) {
                if (!constructor_term(psi) || is_capp(psi))
                    throw SimulationMismatch(total + 1, "first-order side is not canonical");
                if (stack.empty()) break;
                SpineFrame f = std::move(stack.back());
                stack.pop_back();
                lam = lambda::Term::app(std::move(lam), std::move(f.lam_arg));
                psi = trs::Term::function(kApp, {std::move(psi), std::move(f.psi_arg)});
                continue;
            }
            if (!constructor_term(psi.arg(1))) throw SimulationMismatch(total, "state is not semi-canonical");
            const trs::Term& head = psi.arg(0);
            if (is_capp(head)) {
                if (n == 0) throw SimulationMismatch(total + 1, "administrative redex in a canonical term");
                const std::uint64_t before = apps_now();
                ++total;
                ++rep.administrative;
                psi = trs::Term::function(kApp, {trs::Term::function(kApp, head.args()), psi.arg(1)});
                const std::uint64_t after = apps_now();
                if (after != before + 1) throw SimulationMismatch(total, "administrative step must add one app");
                const bool ok = readback_equals(rb, eq, psi, lam);
                if (opt.record)
                    rep.rows.push_back({total, n, plug_psi(psi, stack), plug_lambda(lam, stack), kAdministrative, after, ok});
                if (!ok) throw SimulationMismatch(total, "administrative step changed the readback");
                continue;
            }
            if (is_app(head)) {
                if (!lam.fun().is_app()) throw SimulationMismatch(total + 1, "head positions differ");
                stack.push_back({lam.arg(), psi.arg(1)});
                lam = lambda::Term(lam.fun());
                psi = trs::Term(psi.arg(0));
                continue;
            }
            if (!lam.fun().is_abs()) throw SimulationMismatch(total + 1, "head positions differ");
            redex = true;
            break;
        }
        if (!redex) {
            rep.normal = true;
            break;
        }
        if (n == opt.fuel) break;

        auto fired = contract(reg, psi);
        if (!fired) throw SimulationMismatch(total + 1, "no first-order rule applies");
        if (fired->second == kAdministrative) throw SimulationMismatch(total + 1, "administrative redex in a canonical term");
        ++n;
        ++total;
        lam = lambda::substitute(lam.fun().body(), lam.fun().name(), lam.arg());
        psi = std::move(fired->first);
        if (!psi_canonical(psi) && !psi_semi_canonical(psi))
            throw SimulationMismatch(total, "state is not semi-canonical");
        const bool ok = readback_equals(rb, eq, psi, lam);
        if (opt.record)
            rep.rows.push_back({total, n, plug_psi(psi, stack), plug_lambda(lam, stack), fired->second, apps_now(), ok});
        if (!ok) throw SimulationMismatch(total, "readback differs from the λ state");
    }

    rep.lambda_result = plug_lambda(lam, stack);
    rep.psi_result = plug_psi(psi, stack);
    const std::uint64_t apps = app_count(rep.psi_result);
    if (rep.normal) {
        if (total < n || total > 2 * n) throw SimulationMismatch(total, "step counts violate n <= m <= 2n");
    } else if (total > 2 * n + apps) {
        throw SimulationMismatch(total, "step counts violate m <= 2n + #app");
    }
    rep.lambda_steps = n;
    rep.psi_steps = total;
    return rep;
}

} // namespace rosetta::defunc
