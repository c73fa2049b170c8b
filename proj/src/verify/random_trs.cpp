#include "rosetta/verify/random.hpp"

#include <algorithm>
#include <string>

namespace rosetta::verify {

namespace {

using trs::Rule;
using trs::Signature;
using trs::Symbol;
using trs::Term;

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// A pattern variable together with the argument column it lives in.
struct PatternVar {
    std::string name;
    std::size_t column;
    bool nested; // strictly below a constructor
};

void collect(const Term& t, std::size_t column, bool nested, std::vector<PatternVar>& out) {
    if (t.is_var()) {
        out.push_back({t.name(), column, nested});
        return;
    }
    for (const auto& a : t.args()) collect(a, column, true, out);
}

// Positions (column, path) of variables at depth < 2 inside a row.
void split_points(const Term& t, trs::Path& path, std::vector<trs::Path>& out) {
    if (t.is_var()) {
        if (path.size() <= 2) out.push_back(path);
        return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(i);
        split_points(t.arg(i), path, out);
        path.pop_back();
    }
}

class SystemBuilder {
public:
    SystemBuilder(Rng& rng, const SystemShape& shape) : rng_(rng), shape_(shape) {}

    trs::RewriteSystem build() {
        trs::RewriteSystem sys;
        const std::size_t g = pick(rng_, 1, std::max<std::size_t>(1, shape_.max_constructors));
        for (std::size_t i = 0; i < g; ++i)
            sys.signature.constructors.push_back(
                {"c" + std::to_string(i), i == 0 ? 0 : pick(rng_, 0, shape_.max_arity)});
        const std::size_t h = pick(rng_, 1, std::max<std::size_t>(1, shape_.max_functions));
        for (std::size_t i = 0; i < h; ++i) {
            std::size_t arity = coin(rng_, 0.1) ? 0 : pick(rng_, 1, std::max<std::size_t>(1, shape_.max_arity));
            sys.signature.functions.push_back({"f" + std::to_string(i), arity});
        }
        sig_ = &sys.signature;
        for (std::size_t i = 0; i < h; ++i) add_rules(i, sys.rules);
        return sys;
    }

private:
    std::string fresh() { return "x" + std::to_string(counter_++); }

    Term fresh_pattern(const Symbol& c) {
        std::vector<Term> args;
        for (std::size_t k = 0; k < c.arity; ++k) args.push_back(Term::var(fresh()));
        return Term::constructor(c.name, std::move(args));
    }

    void add_rules(std::size_t fi, std::vector<Rule>& rules) {
        const Symbol& f = sig_->functions[fi];
        std::vector<std::vector<Term>> rows(1);
        for (std::size_t k = 0; k < f.arity; ++k) rows[0].push_back(Term::var(fresh()));

        const std::size_t splits = f.arity == 0 ? 0 : pick(rng_, 0, shape_.max_splits);
        for (std::size_t s = 0; s < splits; ++s) {
            const std::size_t r = pick(rng_, 0, rows.size() - 1);
            std::vector<trs::Path> points;
            for (std::size_t k = 0; k < rows[r].size(); ++k) {
                std::vector<trs::Path> local;
                trs::Path inner;
                split_points(rows[r][k], inner, local);
                for (auto& p : local) {
                    p.insert(p.begin(), k);
                    if (p.size() <= 2) points.push_back(p);
                }
            }
            if (points.empty()) continue;
            const trs::Path& at = points[pick(rng_, 0, points.size() - 1)];
            std::vector<std::vector<Term>> replacement;
            for (const auto& c : sig_->constructors) {
                auto row = rows[r];
                const trs::Path inner(at.begin() + 1, at.end());
                row[at[0]] = trs::replace_at(row[at[0]], inner, fresh_pattern(c));
                replacement.push_back(std::move(row));
            }
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r));
            rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(r), replacement.begin(), replacement.end());
        }

        std::vector<std::vector<Term>> kept;
        for (auto& row : rows)
            if (!coin(rng_, 0.15)) kept.push_back(std::move(row));
        if (kept.empty()) kept.push_back(rows.front());

        for (auto& row : kept) {
            std::vector<PatternVar> pvars;
            for (std::size_t k = 0; k < row.size(); ++k) collect(row[k], k, false, pvars);
            Term rhs = random_rhs(fi, row, pvars, 3);
            rules.push_back(Rule{f.name, std::move(row), std::move(rhs)});
        }
    }

    // Arguments for a structurally decreasing self-call, if one exists.
    std::optional<std::vector<Term>> decreasing_args(const std::vector<Term>& row,
                                                     const std::vector<PatternVar>& pvars) {
        std::vector<Term> args;
        bool strict = false;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k].is_var()) {
                args.push_back(row[k]);
                continue;
            }
            std::vector<const PatternVar*> inside;
            for (const auto& v : pvars)
                if (v.column == k && v.nested) inside.push_back(&v);
            if (inside.empty()) return std::nullopt;
            args.push_back(Term::var(inside[pick(rng_, 0, inside.size() - 1)]->name));
            strict = true;
        }
        if (!strict) return std::nullopt;
        return args;
    }

    Term random_rhs(std::size_t fi, const std::vector<Term>& row, const std::vector<PatternVar>& pvars,
                    std::size_t depth) {
        const auto& cons = sig_->constructors;
        const auto& funs = sig_->functions;
        if (depth == 0) {
            if (!pvars.empty() && coin(rng_, 0.6)) return Term::var(pvars[pick(rng_, 0, pvars.size() - 1)].name);
            std::vector<const Symbol*> nullary;
            for (const auto& c : cons)
                if (c.arity == 0) nullary.push_back(&c);
            return Term::constructor(nullary[pick(rng_, 0, nullary.size() - 1)]->name);
        }
        const std::size_t choice = pick(rng_, 0, 9);
        if (choice < 3 && !pvars.empty()) return Term::var(pvars[pick(rng_, 0, pvars.size() - 1)].name);
        if (choice < 5) {
            if (auto args = decreasing_args(row, pvars)) return Term::function(funs[fi].name, std::move(*args));
        }
        if (choice < 7 && fi + 1 < funs.size()) {
            const Symbol& g = funs[pick(rng_, fi + 1, funs.size() - 1)];
            std::vector<Term> args;
            for (std::size_t k = 0; k < g.arity; ++k) args.push_back(random_rhs(fi, row, pvars, depth - 1));
            return Term::function(g.name, std::move(args));
        }
        const Symbol& c = cons[pick(rng_, 0, cons.size() - 1)];
        std::vector<Term> args;
        for (std::size_t k = 0; k < c.arity; ++k) args.push_back(random_rhs(fi, row, pvars, depth - 1));
        return Term::constructor(c.name, std::move(args));
    }

    Rng& rng_;
    SystemShape shape_;
    const Signature* sig_ = nullptr;
    std::size_t counter_ = 0;
};

} // namespace

trs::RewriteSystem random_system(Rng& rng, const SystemShape& shape) {
    return SystemBuilder(rng, shape).build();
}

Term random_constructor_term(Rng& rng, const Signature& sig, std::size_t depth) {
    std::vector<const Symbol*> choices;
    for (const auto& c : sig.constructors)
        if (depth > 0 || c.arity == 0) choices.push_back(&c);
    const Symbol& c = *choices[pick(rng, 0, choices.size() - 1)];
    std::vector<Term> args;
    for (std::size_t k = 0; k < c.arity; ++k)
        args.push_back(random_constructor_term(rng, sig, pick(rng, 0, depth - 1)));
    return Term::constructor(c.name, std::move(args));
}

Term random_call(Rng& rng, const Signature& sig, std::size_t depth) {
    const Symbol& f = sig.functions[pick(rng, 0, sig.functions.size() - 1)];
    std::vector<Term> args;
    for (std::size_t k = 0; k < f.arity; ++k) {
        if (depth > 0 && coin(rng, 0.2))
            args.push_back(random_call(rng, sig, depth - 1));
        else
            args.push_back(random_constructor_term(rng, sig, pick(rng, 0, depth)));
    }
    return Term::function(f.name, std::move(args));
}

} // namespace rosetta::verify
