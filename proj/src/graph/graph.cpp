#include "rosetta/graph/graph.hpp"

#include "rosetta/error.hpp"

#include <json.hpp>

#include <sstream>
#include <unordered_map>

namespace rosetta::graph {

namespace {

// Reachable vertices in post-order (children left to right, each vertex once).
std::vector<VertexId> postorder(const LabelledGraph& g, VertexId from) {
    std::vector<VertexId> out;
    std::vector<char> seen(g.size(), 0);
    std::vector<std::pair<VertexId, std::size_t>> stack{{from, 0}};
    seen[from] = 1;
    while (!stack.empty()) {
        auto& [v, i] = stack.back();
        if (i < g[v].succ.size()) {
            const VertexId w = g[v].succ[i++];
            if (!seen[w]) {
                seen[w] = 1;
                stack.emplace_back(w, 0);
            }
        } else {
            out.push_back(v);
            stack.pop_back();
        }
    }
    return out;
}

} // namespace

bool LabelledGraph::closed() const {
    for (const auto& v : vertices)
        if (!v.labelled) return false;
    return true;
}

void LabelledGraph::check() const {
    for (VertexId v = 0; v < size(); ++v) {
        if (!vertices[v].labelled && !vertices[v].succ.empty()) throw Error("unlabelled vertex with successors");
        for (VertexId w : vertices[v].succ)
            if (w >= size()) throw Error("dangling edge");
    }
    // 0 = new, 1 = on stack, 2 = done
    std::vector<char> state(size(), 0);
    for (VertexId s = 0; s < size(); ++s) {
        if (state[s]) continue;
        std::vector<std::pair<VertexId, std::size_t>> stack{{s, 0}};
        state[s] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < vertices[v].succ.size()) {
                const VertexId w = vertices[v].succ[i++];
                if (state[w] == 1) throw Error("cycle through vertex " + std::to_string(w));
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
}

TermGraph from_term(const trs::Term& t) {
    TermGraph g;
    auto build = [&](auto&& self, const trs::Term& u) -> VertexId {
        Vertex v;
        v.symbol = u.name();
        v.labelled = !u.is_var();
        v.function = v.labelled && u.is_function();
        const VertexId id = g.graph.add(std::move(v));
        std::vector<VertexId> succ;
        for (const auto& a : u.args()) succ.push_back(self(self, a));
        g.graph[id].succ = std::move(succ);
        return id;
    };
    g.root = build(build, t);
    return g;
}

trs::Term unfold(const LabelledGraph& g, VertexId from) {
    std::unordered_map<VertexId, trs::Term> memo;
    for (VertexId v : postorder(g, from)) {
        const Vertex& x = g[v];
        if (!x.labelled) {
            memo.emplace(v, trs::Term::var(x.symbol.empty() ? "_" + std::to_string(v) : x.symbol));
            continue;
        }
        std::vector<trs::Term> args;
        args.reserve(x.succ.size());
        for (VertexId w : x.succ) args.push_back(memo.at(w));
        memo.emplace(v, trs::Term::node(x.symbol, x.function, std::move(args)));
    }
    return memo.at(from);
}

trs::Term unfold(const TermGraph& g) { return unfold(g.graph, g.root); }

std::vector<VertexId> preorder(const LabelledGraph& g, VertexId from) {
    std::vector<VertexId> out;
    std::vector<char> seen(g.size(), 0);
    std::vector<VertexId> stack{from};
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = 1;
        out.push_back(v);
        const auto& s = g[v].succ;
        for (auto it = s.rbegin(); it != s.rend(); ++it)
            if (!seen[*it]) stack.push_back(*it);
    }
    return out;
}

std::vector<bool> function_free(const LabelledGraph& g) {
    std::vector<bool> free(g.size(), true);
    std::vector<char> done(g.size(), 0);
    for (VertexId s = 0; s < g.size(); ++s) {
        if (done[s]) continue;
        for (VertexId v : postorder(g, s)) {
            if (done[v]) continue;
            bool f = !g[v].function;
            for (VertexId w : g[v].succ) f = f && free[w];
            free[v] = f;
            done[v] = 1;
        }
    }
    return free;
}

bool constructor_shared(const TermGraph& g) {
    auto order = postorder(g.graph, g.root);
    std::vector<unsigned char> paths(g.size(), 0);
    paths[g.root] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (VertexId w : g.graph[*it].succ) paths[w] = static_cast<unsigned char>(std::min(2, paths[w] + paths[*it]));
    const auto free = function_free(g.graph);
    for (VertexId v : order)
        if (paths[v] >= 2 && !free[v]) return false;
    return true;
}

void collect_garbage(TermGraph& g) {
    const auto order = preorder(g.graph, g.root);
    std::vector<VertexId> remap(g.size(), kNoVertex);
    for (VertexId i = 0; i < order.size(); ++i) remap[order[i]] = i;
    LabelledGraph out;
    out.vertices.reserve(order.size());
    for (VertexId v : order) {
        Vertex x = std::move(g.graph[v]);
        for (auto& w : x.succ) w = remap[w];
        out.vertices.push_back(std::move(x));
    }
    g.graph = std::move(out);
    g.root = 0;
}

bool isomorphic(const TermGraph& a, const TermGraph& b) {
    std::vector<VertexId> fwd(a.size(), kNoVertex), bwd(b.size(), kNoVertex);
    std::vector<std::pair<VertexId, VertexId>> todo{{a.root, b.root}};
    fwd[a.root] = b.root;
    bwd[b.root] = a.root;
    while (!todo.empty()) {
        auto [u, v] = todo.back();
        todo.pop_back();
        const Vertex& x = a.graph[u];
        const Vertex& y = b.graph[v];
        if (x.labelled != y.labelled || x.succ.size() != y.succ.size()) return false;
        if (x.labelled && (x.symbol != y.symbol || x.function != y.function)) return false;
        for (std::size_t i = 0; i < x.succ.size(); ++i) {
            const VertexId p = x.succ[i], q = y.succ[i];
            if (fwd[p] == kNoVertex && bwd[q] == kNoVertex) {
                fwd[p] = q;
                bwd[q] = p;
                todo.emplace_back(p, q);
            } else if (fwd[p] != q || bwd[q] != p) {
                return false;
            }
        }
    }
    return true;
}

std::string to_dot(const TermGraph& g, const std::string& name) {
    const auto order = preorder(g.graph, g.root);
    std::unordered_map<VertexId, std::size_t> num;
    for (std::size_t i = 0; i < order.size(); ++i) num.emplace(order[i], i);
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (VertexId v : order) {
        const Vertex& x = g.graph[v];
        os << "  n" << num[v] << " [label=\"" << (x.labelled ? x.symbol : "⊥") << '"';
        if (v == g.root) os << ", shape=doublecircle";
        else if (!x.labelled) os << ", shape=box";
        os << "];\n";
    }
    for (VertexId v : order) {
        const auto& s = g.graph[v].succ;
        for (std::size_t i = 0; i < s.size(); ++i)
            os << "  n" << num[v] << " -> n" << num[s[i]] << " [label=\"" << i + 1 << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_json(const TermGraph& g) {
    const auto order = preorder(g.graph, g.root);
    std::unordered_map<VertexId, std::size_t> num;
    for (std::size_t i = 0; i < order.size(); ++i) num.emplace(order[i], i);
    nlohmann::json vs = nlohmann::json::array();
    for (VertexId v : order) {
        const Vertex& x = g.graph[v];
        nlohmann::json succ = nlohmann::json::array();
        for (VertexId w : x.succ) succ.push_back(num[w]);
        nlohmann::json row{{"id", num[v]}, {"function", x.function}, {"succ", succ}};
        row["label"] = x.labelled ? nlohmann::json(x.symbol) : nlohmann::json(nullptr);
        vs.push_back(std::move(row));
    }
    return nlohmann::json{{"root", 0}, {"vertices", vs}}.dump();
}

} // namespace rosetta::graph
