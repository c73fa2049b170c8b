#include "rosetta/graph/rewrite.hpp"

#include "rosetta/error.hpp"

#include <json.hpp>

namespace rosetta::graph {

GraphRule translate_rule(const trs::Rule& rule, std::size_t tag) {
    GraphRule out;
    out.tag = tag;
    std::unordered_map<std::string, VertexId> shared;
    auto build = [&](auto&& self, const trs::Term& t) -> VertexId {
        if (t.is_var()) {
            auto it = shared.find(t.name());
            if (it != shared.end()) return it->second;
            Vertex v;
            v.symbol = t.name();
            const VertexId id = out.graph.add(std::move(v));
            shared.emplace(t.name(), id);
            return id;
        }
        std::vector<VertexId> succ;
        for (const auto& a : t.args()) succ.push_back(self(self, a));
        return out.graph.add(Vertex{t.name(), true, t.is_function(), std::move(succ)});
    };
    std::vector<VertexId> args;
    for (const auto& p : rule.lhs_args) args.push_back(build(build, p));
    out.left_root = out.graph.add(Vertex{rule.head, true, true, std::move(args)});
    out.right_root = build(build, rule.rhs);
    return out;
}

bool left_paths_only(const GraphRule& r) {
    const auto& g = r.graph;
    if (!g[r.left_root].labelled || !g[r.left_root].function) return false;
    for (VertexId v : preorder(g, r.left_root))
        if (v != r.left_root && g[v].function) return false;
    return true;
}

SystemRules::SystemRules(const trs::RewriteSystem& sys) {
    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        rules_.push_back(translate_rule(sys.rules[i], i));
        by_head_[sys.rules[i].head].push_back(i);
    }
}

std::vector<const GraphRule*> SystemRules::candidates(const TermGraph& g, VertexId v) {
    std::vector<const GraphRule*> out;
    auto it = by_head_.find(g.graph[v].symbol);
    if (it != by_head_.end())
        for (std::size_t i : it->second) out.push_back(&rules_[i]);
    return out;
}

const GraphRule& ClosureRules::rule(std::size_t constructor) {
    auto it = cache_.find(constructor);
    if (it != cache_.end()) return it->second;
    const auto& c = reg_.at(constructor);
    std::vector<trs::Term> params;
    for (const auto& p : c.params) params.push_back(trs::Term::var(p));
    trs::Rule r{std::string(defunc::kApp),
                {trs::Term::constructor(c.symbol, std::move(params)), trs::Term::var(c.binder)},
                reg_.phi_rhs(c)};
    return cache_.emplace(constructor, translate_rule(r, constructor)).first->second;
}

std::vector<const GraphRule*> ClosureRules::candidates(const TermGraph& g, VertexId v) {
    const Vertex& x = g.graph[v];
    if (x.symbol != defunc::kApp || x.succ.size() != 2) return {};
    const Vertex& head = g.graph[x.succ[0]];
    if (!head.labelled || head.function) return {};
    auto k = defunc::constructor_index(head.symbol);
    if (!k || *k >= reg_.size() || reg_.at(*k).arity() != head.succ.size()) return {};
    return {&rule(*k)};
}

std::optional<Redex> match_at(const TermGraph& g, VertexId v, const GraphRule& r, const std::vector<bool>& free) {
    Redex out{&r, std::vector<VertexId>(r.graph.size(), kNoVertex)};
    std::vector<std::pair<VertexId, VertexId>> todo{{r.left_root, v}};
    while (!todo.empty()) {
        auto [u, w] = todo.back();
        todo.pop_back();
        const Vertex& pu = r.graph[u];
        if (out.phi[u] != kNoVertex) {
            if (out.phi[u] != w) return std::nullopt;
            continue;
        }
        if (!pu.labelled) {
            if (!free[w]) return std::nullopt;
            out.phi[u] = w;
            continue;
        }
        const Vertex& gw = g.graph[w];
        if (!gw.labelled || gw.symbol != pu.symbol || gw.function != pu.function || gw.succ.size() != pu.succ.size())
            return std::nullopt;
        out.phi[u] = w;
        for (std::size_t i = pu.succ.size(); i-- > 0;) todo.emplace_back(pu.succ[i], gw.succ[i]);
    }
    return out;
}

std::optional<Redex> find_redex(const TermGraph& g, RuleSource& rules) {
    const auto free = function_free(g.graph);
    // Post-order: children before parents, left to right.
    std::vector<char> seen(g.size(), 0);
    std::vector<std::pair<VertexId, std::size_t>> stack{{g.root, 0}};
    seen[g.root] = 1;
    while (!stack.empty()) {
        auto [v, i] = stack.back();
        const auto& succ = g.graph[v].succ;
        if (i < succ.size()) {
            ++stack.back().second;
            const VertexId w = succ[i];
            if (!seen[w] && !free[w]) {
                seen[w] = 1;
                stack.emplace_back(w, 0);
            }
            continue;
        }
        stack.pop_back();
        if (!g.graph[v].function) continue;
        for (const GraphRule* r : rules.candidates(g, v))
            if (auto m = match_at(g, v, *r, free)) return m;
    }
    return std::nullopt;
}

namespace {

FireInfo fire_impl(TermGraph& g, const Redex& redex, FirePhases* phases) {
    const GraphRule& r = *redex.rule;
    FireInfo info;
    info.rule = r.tag;

    // Build: copy the part of the right tree outside the left subgraph.
    std::vector<VertexId> img = redex.phi;
    std::vector<VertexId> order;
    {
        std::vector<char> seen(r.graph.size(), 0);
        std::vector<std::pair<VertexId, std::size_t>> stack{{r.right_root, 0}};
        seen[r.right_root] = 1;
        while (!stack.empty()) {
            auto [u, i] = stack.back();
            if (i < r.graph[u].succ.size()) {
                ++stack.back().second;
                const VertexId w = r.graph[u].succ[i];
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.emplace_back(w, 0);
                }
                continue;
            }
            order.push_back(u);
            stack.pop_back();
        }
    }
    for (VertexId u : order) {
        if (img[u] != kNoVertex) continue;
        const Vertex& pu = r.graph[u];
        if (!pu.labelled) throw Error("right-hand side variable missing from the left-hand side");
        std::vector<VertexId> succ;
        succ.reserve(pu.succ.size());
        for (VertexId w : pu.succ) succ.push_back(img[w]);
        img[u] = g.graph.add(Vertex{pu.symbol, true, pu.function, std::move(succ)});
        ++info.built;
    }
    if (phases) phases->built = g;

    // Redirect every edge into the redex vertex.
    const VertexId from = redex.at();
    const VertexId to = img[r.right_root];
    for (auto& x : g.graph.vertices)
        for (auto& w : x.succ)
            if (w == from) w = to;
    if (g.root == from) {
        g.root = to;
        info.root_moved = true;
    }
    if (phases) phases->redirected = g;

    const std::size_t before = g.size();
    collect_garbage(g);
    info.collected = before - g.size();
    return info;
}

} // namespace

FireInfo fire(TermGraph& g, const Redex& redex) { return fire_impl(g, redex, nullptr); }

FirePhases fire_phases(const TermGraph& g, const Redex& redex) {
    FirePhases out;
    out.result = g;
    out.info = fire_impl(out.result, redex, &out);
    return out;
}

GraphOutcome graph_normalize(TermGraph g, RuleSource& rules, std::uint64_t fuel, const GraphObserver& observer) {
    GraphOutcome out;
    out.trace.push_back({0, g.size(), 0, false});
    while (true) {
        auto redex = find_redex(g, rules);
        if (!redex) {
            const auto free = function_free(g.graph);
            out.status = free[g.root] ? trs::Status::ConstructorNF : trs::Status::Deadlock;
            break;
        }
        if (out.steps == fuel) {
            out.status = trs::Status::FuelExhausted;
            break;
        }
        FireInfo info = fire(g, *redex);
        ++out.steps;
        out.trace.push_back({out.steps, g.size(), info.rule, info.root_moved});
        if (observer) observer(out.steps, g, info);
    }
    out.graph = std::move(g);
    return out;
}

bool check_size_bound(const lambda::Term& m, const std::vector<TraceRow>& trace) {
    const std::uint64_t len = m.length();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].graph_size > (trace[i].step + 1) * len) return false;
        if (i > 0 && trace[i].graph_size > trace[i - 1].graph_size + len) return false;
    }
    return true;
}

std::string trace_to_json(const std::vector<TraceRow>& trace) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : trace)
        rows.push_back({{"step", r.step},
                        {"graph_size", r.graph_size},
                        {"fired_rule", r.fired_rule},
                        {"root_moved", r.root_moved}});
    return rows.dump();
}

} // namespace rosetta::graph
