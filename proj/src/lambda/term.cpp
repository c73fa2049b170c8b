#include "rosetta/lambda/term.hpp"

#include "rosetta/detail/hash.hpp"
#include "rosetta/error.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace rosetta::lambda {

namespace {

const std::shared_ptr<const Names>& empty_names() {
    static const auto empty = std::make_shared<const Names>();
    return empty;
}

bool contains(const Names& names, const std::string& x) {
    return std::binary_search(names.begin(), names.end(), x);
}

std::shared_ptr<const Names> merge(const std::shared_ptr<const Names>& a,
                                   const std::shared_ptr<const Names>& b) {
    if (b->empty() || a == b) return a;
    if (a->empty()) return b;
    Names out;
    out.reserve(a->size() + b->size());
    std::set_union(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(out));
    if (out.size() == a->size()) return a;
    if (out.size() == b->size()) return b;
    return std::make_shared<const Names>(std::move(out));
}

std::shared_ptr<const Names> remove(const std::shared_ptr<const Names>& names,
                                    const std::string& x) {
    if (!contains(*names, x)) return names;
    if (names->size() == 1) return empty_names();
    Names out;
    out.reserve(names->size() - 1);
    for (const auto& n : *names)
        if (n != x) out.push_back(n);
    return std::make_shared<const Names>(std::move(out));
}

constexpr std::size_t kVarTag = 0x51;
constexpr std::size_t kAbsTag = 0xa7;
constexpr std::size_t kAppTag = 0xc3;

} // namespace

detail::Node::~Node() {
    // Long application spines would otherwise be released recursively.
    std::vector<std::shared_ptr<const Node>> pending;
    auto take = [&pending](Term& t) {
        if (t.node_ && t.node_.use_count() == 1) pending.push_back(std::move(t.node_));
    };
    take(left);
    take(right);
    while (!pending.empty()) {
        auto node = std::move(pending.back());
        pending.pop_back();
        auto& mut = const_cast<Node&>(*node);
        take(mut.left);
        take(mut.right);
    }
}

Term Term::var(std::string name) {
    auto node = std::make_shared<detail::Node>();
    node->kind = Kind::Var;
    node->hash = rosetta::detail::combine(kVarTag, std::hash<std::string>{}(name));
    node->length = 1;
    node->free = std::make_shared<const Names>(Names{name});
    node->name = std::move(name);
    return Term(std::move(node));
}

Term Term::abs(std::string binder, Term body) {
    auto node = std::make_shared<detail::Node>();
    node->kind = Kind::Abs;
    node->hash = rosetta::detail::combine(rosetta::detail::combine(kAbsTag, std::hash<std::string>{}(binder)),
                                 body.hash());
    node->length = rosetta::detail::saturating_add(body.length(), 1);
    node->free = remove(body.node_->free, binder);
    node->name = std::move(binder);
    node->left = std::move(body);
    return Term(std::move(node));
}

Term Term::app(Term fun, Term arg) {
    auto node = std::make_shared<detail::Node>();
    node->kind = Kind::App;
    node->hash = rosetta::detail::combine(rosetta::detail::combine(kAppTag, fun.hash()), arg.hash());
    node->length = rosetta::detail::saturating_add(rosetta::detail::saturating_add(fun.length(), arg.length()), 1);
    node->free = merge(fun.node_->free, arg.node_->free);
    node->left = std::move(fun);
    node->right = std::move(arg);
    return Term(std::move(node));
}

Term Term::lams(std::span<const std::string> binders, Term body) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = abs(*it, std::move(body));
    return body;
}

Term Term::apps(Term head, std::span<const Term> args) {
    for (const auto& a : args) head = app(std::move(head), a);
    return head;
}

std::size_t EqualityMemo::PairHash::operator()(const std::pair<const void*, const void*>& p) const {
    return rosetta::detail::combine(std::hash<const void*>{}(p.first), std::hash<const void*>{}(p.second));
}

bool EqualityMemo::equal(const Term& a, const Term& b) {
    using Key = std::pair<const void*, const void*>;
    std::vector<std::pair<Term, Term>> work{{a, b}};
    std::unordered_set<Key, PairHash> visited;
    std::vector<std::pair<Term, Term>> fresh;
    while (!work.empty()) {
        auto [x, y] = std::move(work.back());
        work.pop_back();
        if (x.identity() == y.identity()) continue;
        if (x.hash() != y.hash() || x.length() != y.length() || x.kind() != y.kind())
            return false;
        const Key key{x.identity(), y.identity()};
        if (proven_.contains(key) || !visited.insert(key).second) continue;
        switch (x.kind()) {
        case Kind::Var:
            if (x.name() != y.name()) return false;
            break;
        case Kind::Abs:
            if (x.name() != y.name()) return false;
            work.emplace_back(x.body(), y.body());
            break;
        case Kind::App:
            work.emplace_back(x.fun(), y.fun());
            work.emplace_back(x.arg(), y.arg());
            break;
        }
        fresh.emplace_back(std::move(x), std::move(y));
    }
    for (auto& [x, y] : fresh) {
        proven_.insert({x.identity(), y.identity()});
        keep_alive_.push_back(std::move(x));
        keep_alive_.push_back(std::move(y));
    }
    return true;
}

bool operator==(const Term& a, const Term& b) {
    if (a.identity() == b.identity()) return true;
    if (!a || !b) return false;
    EqualityMemo memo;
    return memo.equal(a, b);
}

std::uint64_t occurrences(const Term& m, const std::string& x) {
    if (!contains(m.free_vars(), x)) return 0;
    switch (m.kind()) {
    case Kind::Var: return 1;
    case Kind::Abs: return occurrences(m.body(), x);
    case Kind::App: return occurrences(m.fun(), x) + occurrences(m.arg(), x);
    }
    return 0;
}

namespace {

using Binding = std::pair<std::string, Term>;

Term substitute_all(const Term& m, std::vector<Binding> bindings) {
    std::erase_if(bindings, [&](const Binding& b) { return !contains(m.free_vars(), b.first); });
    if (bindings.empty()) return m;
    switch (m.kind()) {
    case Kind::Var:
        return bindings.front().second;
    case Kind::Abs: {
        // The binder cannot be among the bindings: they are free in m.
        for (const auto& [x, n] : bindings) {
            if (contains(n.free_vars(), m.name()))
                throw CaptureError("substituting for " + x + " would capture " + m.name());
        }
        return Term::abs(m.name(), substitute_all(m.body(), std::move(bindings)));
    }
    case Kind::App: {
        Term f = substitute_all(m.fun(), bindings);
        Term a = substitute_all(m.arg(), std::move(bindings));
        return Term::app(std::move(f), std::move(a));
    }
    }
    return m;
}

} // namespace

Term substitute(const Term& m, const std::string& x, const Term& n) {
    return substitute_all(m, {{x, n}});
}

Term substitute(const Term& m, std::span<const std::pair<std::string, Term>> bindings) {
    return substitute_all(m, std::vector<Binding>(bindings.begin(), bindings.end()));
}

std::vector<Term> subterms(const Term& m) {
    std::unordered_set<Term> seen;
    std::vector<Term> out;
    std::vector<Term> work{m};
    while (!work.empty()) {
        Term t = std::move(work.back());
        work.pop_back();
        if (!seen.insert(t).second) continue;
        out.push_back(t);
        if (t.is_abs()) work.push_back(t.body());
        if (t.is_app()) {
            work.push_back(t.arg());
            work.push_back(t.fun());
        }
    }
    return out;
}

namespace {

bool alpha_eq(const Term& a, const Term& b, Names& env_a, Names& env_b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Kind::Var: {
        auto ia = std::find(env_a.rbegin(), env_a.rend(), a.name());
        auto ib = std::find(env_b.rbegin(), env_b.rend(), b.name());
        const bool bound_a = ia != env_a.rend();
        const bool bound_b = ib != env_b.rend();
        if (bound_a != bound_b) return false;
        if (!bound_a) return a.name() == b.name();
        return (ia - env_a.rbegin()) == (ib - env_b.rbegin());
    }
    case Kind::Abs: {
        env_a.push_back(a.name());
        env_b.push_back(b.name());
        const bool eq = alpha_eq(a.body(), b.body(), env_a, env_b);
        env_a.pop_back();
        env_b.pop_back();
        return eq;
    }
    case Kind::App:
        return alpha_eq(a.fun(), b.fun(), env_a, env_b) && alpha_eq(a.arg(), b.arg(), env_a, env_b);
    }
    return false;
}

} // namespace

bool alpha_equivalent(const Term& a, const Term& b) {
    Names env_a, env_b;
    return alpha_eq(a, b, env_a, env_b);
}

} // namespace rosetta::lambda
