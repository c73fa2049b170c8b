#pragma once

#include "rosetta/trs/term.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rosetta::graph {

using VertexId = std::size_t;
constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

struct Vertex {
    /// Symbol when labelled; otherwise an optional name (variables of rule graphs).
    std::string symbol;
    bool labelled = false;
    bool function = false;
    std::vector<VertexId> succ;
};

/// Ordered DAG with a partial labelling. Unlabelled vertices have no successors.
struct LabelledGraph {
    std::vector<Vertex> vertices;

    std::size_t size() const { return vertices.size(); }
    const Vertex& operator[](VertexId v) const { return vertices[v]; }
    Vertex& operator[](VertexId v) { return vertices[v]; }

    VertexId add(Vertex v) {
        vertices.push_back(std::move(v));
        return vertices.size() - 1;
    }
    bool closed() const;
    /// Throws rosetta::Error on dangling successors or cycles.
    void check() const;
};

struct TermGraph {
    LabelledGraph graph;
    VertexId root = kNoVertex;

    std::size_t size() const { return graph.size(); }
};

/// Abstract syntax tree of `t`; one vertex per symbol or variable occurrence.
TermGraph from_term(const trs::Term& t);
/// Unfolding from the root. Unlabelled vertices become variables named after
/// their `symbol`, or "_<id>" when it is empty.
trs::Term unfold(const TermGraph& g);
trs::Term unfold(const LabelledGraph& g, VertexId v);

/// Vertices reachable from `from`, in preorder (left to right).
std::vector<VertexId> preorder(const LabelledGraph& g, VertexId from);

/// For every vertex: no function-labelled vertex is reachable from it.
std::vector<bool> function_free(const LabelledGraph& g);

/// Every vertex reachable from the root along two distinct paths heads only
/// constructor paths.
bool constructor_shared(const TermGraph& g);

/// Removes vertices unreachable from the root, renumbering in preorder.
void collect_garbage(TermGraph& g);

/// Rooted isomorphism of the parts reachable from the roots. Unlabelled
/// vertices match each other regardless of their names.
bool isomorphic(const TermGraph& a, const TermGraph& b);

/// Graphviz rendering; vertices numbered in preorder from the root.
std::string to_dot(const TermGraph& g, const std::string& name = "G");
/// {"root":0,"vertices":[{"id":0,"label":"f","function":true,"succ":[1,2]},...]}
std::string to_json(const TermGraph& g);

} // namespace rosetta::graph
