#pragma once

#include "rosetta/defunc/registry.hpp"
#include "rosetta/lambda/term.hpp"
#include "rosetta/trs/system.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace rosetta::defunc {

/// Call-by-value defunctionalization: variables stay variables, every
/// abstraction becomes its closure constructor applied to its free
/// variables, every application becomes app(·,·).
trs::Term encode(const lambda::Term& m, Registry& reg);

/// Memo entries kept by the paired simulations before they start afresh.
inline constexpr std::size_t kMemoLimit = std::size_t{1} << 20;

/// Inverse direction; app and capp both read back as application.
/// Memoizes per node, so reading back successive states of one reduction
/// only pays for the freshly built nodes.
class Readback {
public:
    explicit Readback(const Registry& reg) : reg_(&reg) {}
    lambda::Term operator()(const trs::Term& t);
    std::size_t size() const { return memo_.size(); }
    void clear() {
        memo_.clear();
        keep_alive_.clear();
    }

private:
    const Registry* reg_;
    std::unordered_map<const void*, lambda::Term> memo_;
    std::vector<trs::Term> keep_alive_;
};

lambda::Term readback(const trs::Term& t, const Registry& reg);

/// Readback of t equals m. Both memos start afresh once they pass kMemoLimit
/// entries, so long runs do not keep every intermediate state alive.
bool readback_equals(Readback& rb, lambda::EqualityMemo& eq, const trs::Term& t, const lambda::Term& m);

/// A constructor term, or app(u, v) with both sides canonical.
bool phi_canonical(const trs::Term& t);

/// Contractor for the (lazily instantiated) rules
///   app(C(x1..xn), x) -> encoding of the body.
/// The reported rule tag is the constructor index.
trs::Contractor phi_contractor(Registry& reg);

/// One leftmost-innermost step.
std::optional<trs::Firing> phi_fire(const trs::Term& t, Registry& reg);
std::optional<trs::Term> phi_step(const trs::Term& t, Registry& reg);

struct CbvRow {
    std::uint64_t step = 0;
    trs::Term phi_term;
    lambda::Term lambda_term;
    bool aligned = true;
};

struct CbvReport {
    std::uint64_t lambda_steps = 0;
    std::uint64_t phi_steps = 0;
    bool normal = false;          // both sides reached a normal form
    lambda::Term lambda_result;
    trs::Term phi_result;
    std::vector<CbvRow> rows;     // filled when requested
};

struct SimulationOptions {
    std::uint64_t fuel = 100000;
    bool record = false;
};

/// Runs weak CBV and the Φ system in lock step, checking after every step
/// that the readback of the first-order state equals the λ state, and that
/// both sides stop together. Throws SimulationMismatch otherwise.
CbvReport simulate_cbv(const lambda::Term& m, Registry& reg, const SimulationOptions& opt = {});

/// Every closure constructor occurring in `terms` has a body that is a
/// subterm of m.
bool check_subterm_property(const lambda::Term& m, const std::vector<trs::Term>& terms,
                            const Registry& reg);

/// Distinct closure constructors occurring in `terms`.
std::vector<std::size_t> constructors_in(const std::vector<trs::Term>& terms, const Registry& reg);

/// Φ rules for the given constructors, one per line, in the system format
/// with constructors spelled C<k>{x.body}.
std::string dump_rules(const std::vector<std::size_t>& constructors, Registry& reg);

} // namespace rosetta::defunc
