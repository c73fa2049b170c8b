#pragma once

#include "rosetta/defunc/registry.hpp"
#include "rosetta/graph/graph.hpp"
#include "rosetta/lambda/term.hpp"
#include "rosetta/trs/system.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

namespace rosetta::graph {

/// Left and right trees over one labelled graph, sharing variable vertices.
struct GraphRule {
    LabelledGraph graph;
    VertexId left_root = kNoVertex;
    VertexId right_root = kNoVertex;
    std::size_t tag = 0;
};

GraphRule translate_rule(const trs::Rule& rule, std::size_t tag = 0);

/// Every path from the left root: a function vertex followed by
/// constructor or unlabelled vertices.
bool left_paths_only(const GraphRule& r);

/// Supplies the rules that may fire at a function vertex.
class RuleSource {
public:
    virtual ~RuleSource() = default;
    virtual std::vector<const GraphRule*> candidates(const TermGraph& g, VertexId v) = 0;
};

/// The translation of a rewrite system, indexed by head symbol.
class SystemRules : public RuleSource {
public:
    explicit SystemRules(const trs::RewriteSystem& sys);
    std::vector<const GraphRule*> candidates(const TermGraph& g, VertexId v) override;
    const std::vector<GraphRule>& rules() const { return rules_; }

private:
    std::vector<GraphRule> rules_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_head_;
};

/// Graph rules of the call-by-value closure system, synthesized on demand
/// from the constructor registry: app(C<k>(params), x) -> encoding of the body.
class ClosureRules : public RuleSource {
public:
    explicit ClosureRules(defunc::Registry& reg) : reg_(reg) {}
    std::vector<const GraphRule*> candidates(const TermGraph& g, VertexId v) override;
    const GraphRule& rule(std::size_t constructor);
    std::size_t synthesized() const { return cache_.size(); }

private:
    defunc::Registry& reg_;
    std::unordered_map<std::size_t, GraphRule> cache_;
};

struct Redex {
    const GraphRule* rule = nullptr;
    /// Image of every rule vertex reachable from the left root; kNoVertex elsewhere.
    std::vector<VertexId> phi;
    VertexId at() const { return phi[rule->left_root]; }
};

/// Homomorphism from the left subgraph of `r` into `g` rooted at `v`, subject
/// to the call-by-value condition on variable images.
std::optional<Redex> match_at(const TermGraph& g, VertexId v, const GraphRule& r, const std::vector<bool>& free);

/// First redex in post-order from the root (leftmost-innermost).
std::optional<Redex> find_redex(const TermGraph& g, RuleSource& rules);

struct FireInfo {
    std::size_t rule = 0;
    bool root_moved = false;
    std::size_t built = 0;      // vertices added by the build phase
    std::size_t collected = 0;  // vertices removed by garbage collection
};

/// Build, redirect and collect, in place.
FireInfo fire(TermGraph& g, const Redex& redex);
/// The intermediate graphs J (after building) and K (after redirection).
struct FirePhases {
    TermGraph built;
    TermGraph redirected;
    TermGraph result;
    FireInfo info;
};
FirePhases fire_phases(const TermGraph& g, const Redex& redex);

struct TraceRow {
    std::uint64_t step = 0;
    std::size_t graph_size = 0;
    std::size_t fired_rule = 0;
    bool root_moved = false;
};

struct GraphOutcome {
    TermGraph graph;
    std::uint64_t steps = 0;
    trs::Status status = trs::Status::ConstructorNF;
    std::vector<TraceRow> trace;  // row 0 is the initial graph
};

using GraphObserver = std::function<void(std::uint64_t, const TermGraph&, const FireInfo&)>;

GraphOutcome graph_normalize(TermGraph g, RuleSource& rules, std::uint64_t fuel,
                             const GraphObserver& observer = {});

/// Sizes along a closure-system run of m: after n firings the graph has at
/// most (n+1)|m| vertices and no firing adds more than |m|.
bool check_size_bound(const lambda::Term& m, const std::vector<TraceRow>& trace);

std::string trace_to_json(const std::vector<TraceRow>& trace);

} // namespace rosetta::graph
