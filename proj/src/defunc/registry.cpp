#include "rosetta/defunc/registry.hpp"

#include "rosetta/defunc/phi.hpp"
#include "rosetta/defunc/psi.hpp"
#include "rosetta/detail/hash.hpp"
#include "rosetta/error.hpp"

#include <charconv>

namespace rosetta::defunc {

namespace {
std::size_t key_hash(const std::string& binder, const lambda::Term& body) {
    return rosetta::detail::combine(std::hash<std::string>{}(binder), body.hash());
}
} // namespace

const ClosureConstructor& Registry::intern(const std::string& binder, const lambda::Term& body) {
    std::lock_guard lock(mu_);
    const std::size_t h = key_hash(binder, body);
    auto [lo, hi] = by_hash_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
        const auto& c = entries_[it->second];
        if (c.binder == binder && c.body == body) return c;
    }
    ClosureConstructor c;
    c.index = entries_.size();
    c.symbol = "C" + std::to_string(c.index);
    c.binder = binder;
    c.body = body;
    c.abstraction = lambda::Term::abs(binder, body);
    c.params = c.abstraction.free_vars();
    entries_.push_back(std::move(c));
    phi_rhs_.emplace_back();
    psi_rhs_.emplace_back();
    by_hash_.emplace(h, entries_.back().index);
    return entries_.back();
}

const ClosureConstructor& Registry::at(std::size_t index) const {
    std::lock_guard lock(mu_);
    if (index >= entries_.size()) throw Error("unknown closure constructor C" + std::to_string(index));
    return entries_[index];
}

const ClosureConstructor* Registry::find(const std::string& symbol) const {
    auto k = constructor_index(symbol);
    if (!k) return nullptr;
    std::lock_guard lock(mu_);
    return *k < entries_.size() ? &entries_[*k] : nullptr;
}

std::size_t Registry::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

trs::Term Registry::phi_rhs(const ClosureConstructor& c) {
    std::lock_guard lock(mu_);
    if (!phi_rhs_[c.index]) {
        trs::Term rhs = encode(c.body, *this);
        phi_rhs_[c.index] = std::move(rhs);
    }
    return *phi_rhs_[c.index];
}

trs::Term Registry::psi_rhs(const ClosureConstructor& c) {
    std::lock_guard lock(mu_);
    if (!psi_rhs_[c.index]) {
        trs::Term rhs = encode_spine(c.body, *this);
        psi_rhs_[c.index] = std::move(rhs);
    }
    return *psi_rhs_[c.index];
}

std::optional<std::size_t> constructor_index(const std::string& symbol) {
    if (symbol.size() < 2 || symbol[0] != 'C') return std::nullopt;
    std::size_t k = 0;
    const char* first = symbol.data() + 1;
    const char* last = symbol.data() + symbol.size();
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return k;
}

} // namespace rosetta::defunc
