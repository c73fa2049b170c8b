#pragma once

#include "rosetta/lambda/term.hpp"
#include "rosetta/trs/system.hpp"

#include <optional>
#include <string>

namespace rosetta::compile {

// Scott encodings over a fixed constructor signature c_1..c_g (declaration
// order). Every generated binder starts with an uppercase letter.
//
//   enc(c_i(t1..tn)) = λY1...λYg.λE. Yi enc(t1) ... enc(tn)
//   bottom           = λY1...λYg.λE. E
class ScottContext {
public:
    explicit ScottContext(trs::Signature sig);

    const trs::Signature& signature() const { return sig_; }
    std::size_t g() const { return sig_.constructors.size(); }
    std::size_t arity(std::size_t i) const { return sig_.constructors.at(i).arity; }

    /// Encoding of a constructor term; throws rosetta::Error otherwise.
    lambda::Term encode(const trs::Term& t) const;
    const lambda::Term& bottom() const { return bottom_; }
    /// λB1...λBk. enc(c_i(B1..Bk)) : builds an encoding in k steps from encoded arguments.
    lambda::Term curried(std::size_t i) const;

    /// Inverse of encode up to α-equivalence (nullopt on anything else, bottom included).
    std::optional<trs::Term> decode(const lambda::Term& m) const;
    bool is_bottom(const lambda::Term& m) const;

    /// Binder names used inside encodings.
    const std::string& selector(std::size_t i) const { return selectors_.at(i); }
    static constexpr const char* kErrorBinder = "E";

private:
    trs::Signature sig_;
    std::vector<std::string> selectors_;
    lambda::Term bottom_;
};

/// Scott encoding with the context built from `sig`.
lambda::Term scott_encode(const trs::Signature& sig, const trs::Term& t);

/// The term computing constructor i (0-based) on encoded arguments, absorbing
/// bottom in any position.
lambda::Term compile_constructor(const ScottContext& ctx, std::size_t i);

} // namespace rosetta::compile
