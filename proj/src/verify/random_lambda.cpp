#include "rosetta/verify/random.hpp"

#include <array>
#include <string>

namespace rosetta::verify {

namespace {

using lambda::Names;
using lambda::Term;

constexpr std::array<const char*, 6> kPool{"x", "y", "z", "w", "u", "v"};

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

class Builder {
public:
    Builder(Rng& rng, bool value_args) : rng_(rng), value_args_(value_args) {}

    // Produces a term of exactly `size` nodes. Requires size >= 2 when the
    // scope is empty.
    Term build(std::size_t size, Names& scope) {
        if (size == 1) return Term::var(scope[uniform(rng_, 0, scope.size() - 1)]);
        const std::size_t min_leaf = scope.empty() ? 2 : 1;
        const bool can_apply = size >= 1 + 2 * min_leaf;
        if (can_apply && coin(rng_, 0.6)) {
            std::size_t left = uniform(rng_, min_leaf, size - 1 - min_leaf);
            std::size_t right = size - 1 - left;
            Term fun = build(left, scope);
            Term arg = value_args_ ? build_value(right, scope) : build(right, scope);
            return Term::app(std::move(fun), std::move(arg));
        }
        return build_abs(size, scope);
    }

private:
    Term build_abs(std::size_t size, Names& scope) {
        std::string binder = kPool[uniform(rng_, 0, kPool.size() - 1)];
        scope.push_back(binder);
        Term body = build(size - 1, scope);
        scope.pop_back();
        return Term::abs(std::move(binder), std::move(body));
    }

    Term build_value(std::size_t size, Names& scope) {
        if (size == 1) return build(1, scope);
        return build_abs(size, scope);
    }

    Rng& rng_;
    bool value_args_;
};

} // namespace

Term random_closed_term(Rng& rng, const TermShape& shape) {
    const std::size_t size = uniform(rng, 2, shape.max_size < 2 ? 2 : shape.max_size);
    Names scope;
    return Builder(rng, shape.value_arguments).build(size, scope);
}

Term random_term(Rng& rng, std::size_t size, const Names& scope) {
    Names s = scope;
    if (s.empty() && size < 2) size = 2;
    return Builder(rng, false).build(size, s);
}

} // namespace rosetta::verify
