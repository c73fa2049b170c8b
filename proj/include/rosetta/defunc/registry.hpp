#pragma once

#include "rosetta/lambda/term.hpp"
#include "rosetta/trs/term.hpp"

#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rosetta::defunc {

/// The first-order constructor standing for the abstraction λbinder.body.
/// Its arguments are the free variables of the abstraction, in order.
struct ClosureConstructor {
    std::size_t index = 0;
    std::string symbol;           // "C<index>"
    std::string binder;
    lambda::Term body;
    lambda::Term abstraction;     // λbinder.body
    lambda::Names params;         // FV(λbinder.body)

    std::size_t arity() const { return params.size(); }
};

inline const std::string kApp = "app";
inline const std::string kCapp = "capp";

/// Append-only dictionary from (binder, body) to constructors. Identity is
/// syntactic: α-variants get distinct entries. Safe for concurrent use;
/// references to entries stay valid for the registry's lifetime.
class Registry {
public:
    const ClosureConstructor& intern(const std::string& binder, const lambda::Term& body);
    const ClosureConstructor& at(std::size_t index) const;
    /// Constructor named by `symbol`, or nullptr for anything else.
    const ClosureConstructor* find(const std::string& symbol) const;
    std::size_t size() const;

    /// Right-hand side of the call-by-value rule for `c`: the encoding of the
    /// body, over the variables params ++ [binder]. Built on first use.
    trs::Term phi_rhs(const ClosureConstructor& c);
    /// Same for the call-by-name system (spine encoding of the body).
    trs::Term psi_rhs(const ClosureConstructor& c);

private:
    mutable std::recursive_mutex mu_;
    std::deque<ClosureConstructor> entries_;
    std::deque<std::optional<trs::Term>> phi_rhs_;
    std::deque<std::optional<trs::Term>> psi_rhs_;
    std::unordered_multimap<std::size_t, std::size_t> by_hash_;
};

/// Parses the index out of a "C<k>" symbol.
std::optional<std::size_t> constructor_index(const std::string& symbol);

} // namespace rosetta::defunc
