#include "rosetta/compile/scott.hpp"

#include "rosetta/error.hpp"

namespace rosetta::compile {

namespace {

std::string numbered(char prefix, std::size_t i) { return prefix + std::to_string(i + 1); }

std::vector<std::string> numbered_list(char prefix, std::size_t n, std::size_t from = 0) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(numbered(prefix, from + i));
    return out;
}

std::vector<lambda::Term> vars(const std::vector<std::string>& names) {
    std::vector<lambda::Term> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(lambda::Term::var(n));
    return out;
}

} // namespace

ScottContext::ScottContext(trs::Signature sig) : sig_(std::move(sig)) {
    selectors_ = numbered_list('Y', g());
    std::vector<std::string> binders = selectors_;
    binders.emplace_back(kErrorBinder);
    bottom_ = lambda::Term::lams(binders, lambda::Term::var(kErrorBinder));
}

lambda::Term ScottContext::encode(const trs::Term& t) const {
    if (t.is_var() || t.is_function()) throw Error("not a constructor term");
    const std::size_t i = sig_.constructor_index(t.name());
    if (i == trs::Signature::npos || arity(i) != t.arity()) throw Error("unknown constructor " + t.name());
    std::vector<lambda::Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(encode(a));
    std::vector<std::string> binders = selectors_;
    binders.emplace_back(kErrorBinder);
    return lambda::Term::lams(binders, lambda::Term::apps(lambda::Term::var(selectors_[i]), args));
}

lambda::Term ScottContext::curried(std::size_t i) const {
    auto params = numbered_list('B', arity(i));
    std::vector<std::string> binders = selectors_;
    binders.emplace_back(kErrorBinder);
    auto body = lambda::Term::lams(binders, lambda::Term::apps(lambda::Term::var(selectors_[i]), vars(params)));
    return lambda::Term::lams(params, body);
}

std::optional<trs::Term> ScottContext::decode(const lambda::Term& m) const {
    std::vector<std::string> binders;
    lambda::Term cur = m;
    for (std::size_t k = 0; k <= g(); ++k) {
        if (!cur.is_abs()) return std::nullopt;
        binders.push_back(cur.name());
        cur = cur.body();
    }
    std::vector<lambda::Term> args;
    while (cur.is_app()) {
        args.push_back(cur.arg());
        cur = cur.fun();
    }
    if (!cur.is_var()) return std::nullopt;
    std::size_t idx = binders.size();
    for (std::size_t k = binders.size(); k-- > 0;)
        if (binders[k] == cur.name()) {
            idx = k;
            break;
        }
    if (idx >= g() || arity(idx) != args.size()) return std::nullopt;
    std::vector<trs::Term> sub;
    sub.reserve(args.size());
    for (auto it = args.rbegin(); it != args.rend(); ++it) {
        auto d = decode(*it);
        if (!d) return std::nullopt;
        sub.push_back(std::move(*d));
    }
    return trs::Term::constructor(sig_.constructors[idx].name, std::move(sub));
}

bool ScottContext::is_bottom(const lambda::Term& m) const { return lambda::alpha_equivalent(m, bottom_); }

lambda::Term scott_encode(const trs::Signature& sig, const trs::Term& t) { return ScottContext(sig).encode(t); }

namespace {

// Builder for constructor i once its first m arguments sit in X1..Xm.
lambda::Term partial_constructor(const ScottContext& ctx, std::size_t i, std::size_t m) {
    const std::size_t k = ctx.arity(i);
    std::vector<std::string> binders;
    for (std::size_t j = 0; j < ctx.g(); ++j) binders.push_back(ctx.selector(j));
    binders.emplace_back(ScottContext::kErrorBinder);
    if (m == k)
        return lambda::Term::lams(binders,
                                  lambda::Term::apps(lambda::Term::var(ctx.selector(i)), vars(numbered_list('X', k))));

    const lambda::Term next = lambda::Term::abs(numbered('X', m), partial_constructor(ctx, i, m + 1));
    std::vector<lambda::Term> branches;
    for (std::size_t j = 0; j < ctx.g(); ++j) {
        auto z = numbered_list('Z', ctx.arity(j));
        auto rebuilt = lambda::Term::lams(binders, lambda::Term::apps(lambda::Term::var(ctx.selector(j)), vars(z)));
        branches.push_back(lambda::Term::lams(z, lambda::Term::app(next, rebuilt)));
    }
    branches.push_back(lambda::Term::lams(numbered_list('W', k - m - 1, m + 1), ctx.bottom()));
    return lambda::Term::abs("S", lambda::Term::apps(lambda::Term::var("S"), branches));
}

} // namespace

lambda::Term compile_constructor(const ScottContext& ctx, std::size_t i) {
    if (i >= ctx.g()) throw Error("constructor index out of range");
    return partial_constructor(ctx, i, 0);
}

} // namespace rosetta::compile
