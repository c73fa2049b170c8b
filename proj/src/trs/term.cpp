#include "rosetta/trs/term.hpp"

#include "rosetta/detail/hash.hpp"
#include "rosetta/error.hpp"

#include <algorithm>
#include <functional>

namespace rosetta::trs {

namespace hashing = rosetta::detail;

detail::Node::~Node() {
    std::vector<std::shared_ptr<const Node>> pending;
    auto take = [&pending](std::vector<Term>& children) {
        for (auto& c : children)
            if (c.node_ && c.node_.use_count() == 1) pending.push_back(std::move(c.node_));
    };
    take(args);
    while (!pending.empty()) {
        auto n = std::move(pending.back());
        pending.pop_back();
        take(const_cast<Node&>(*n).args);
    }
}

Term Term::var(std::string name) {
    auto n = std::make_shared<detail::Node>();
    n->is_var = true;
    n->has_var = true;
    n->hash = hashing::combine(0x3b, std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::node(std::string symbol, bool is_function, std::vector<Term> args) {
    auto n = std::make_shared<detail::Node>();
    n->is_function = is_function;
    n->has_function = is_function;
    std::size_t h = hashing::combine(is_function ? 0x7f : 0x1d, std::hash<std::string>{}(symbol));
    std::uint64_t len = 1;
    for (const auto& a : args) {
        n->has_function = n->has_function || a.has_function();
        n->has_var = n->has_var || a.has_var();
        h = hashing::combine(h, a.hash());
        len = hashing::saturating_add(len, a.length());
    }
    n->hash = h;
    n->length = len;
    n->name = std::move(symbol);
    n->args = std::move(args);
    return Term(std::move(n));
}

std::size_t EqualityMemo::PairHash::operator()(const std::pair<const void*, const void*>& p) const {
    return hashing::combine(std::hash<const void*>{}(p.first), std::hash<const void*>{}(p.second));
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
        if (x.hash() != y.hash() || x.length() != y.length() || x.is_var() != y.is_var() ||
            x.is_function() != y.is_function() || x.arity() != y.arity() || x.name() != y.name())
            return false;
        const Key key{x.identity(), y.identity()};
        if (proven_.contains(key) || !visited.insert(key).second) continue;
        for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.arg(i), y.arg(i));
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

std::uint64_t count(const Term& t, const std::string& symbol) {
    if (t.is_var()) return 0;
    std::uint64_t n = t.name() == symbol ? 1 : 0;
    for (const auto& a : t.args()) n += count(a, symbol);
    return n;
}

namespace {
void collect_vars(const Term& t, std::vector<std::string>& out) {
    if (!t.has_var()) return;
    if (t.is_var()) {
        if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, out);
}
} // namespace

std::vector<std::string> vars(const Term& t) {
    std::vector<std::string> out;
    collect_vars(t, out);
    return out;
}

const Term& at(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (auto i : p) {
        if (cur->is_var() || i >= cur->arity()) throw Error("position outside the term");
        cur = &cur->arg(i);
    }
    return *cur;
}

Term replace_at(const Term& t, const Path& p, std::size_t depth, Term replacement) {
    if (depth == p.size()) return replacement;
    if (t.is_var() || p[depth] >= t.arity()) throw Error("position outside the term");
    std::vector<Term> args = t.args();
    args[p[depth]] = replace_at(t.arg(p[depth]), p, depth + 1, std::move(replacement));
    return Term::node(t.name(), t.is_function(), std::move(args));
}

const Term* lookup(const Substitution& s, const std::string& x) {
    for (const auto& [name, value] : s)
        if (name == x) return &value;
    return nullptr;
}

Term instantiate(const Term& t, const Substitution& s) {
    if (!t.has_var()) return t;
    if (t.is_var()) {
        const Term* v = lookup(s, t.name());
        return v ? *v : t;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(instantiate(a, s));
    return Term::node(t.name(), t.is_function(), std::move(args));
}

} // namespace rosetta::trs
