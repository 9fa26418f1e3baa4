// topology.hpp: Two-Fused-Star graph, canonical node order and edge orbits.
//
// Nodes are (i, mu) with i in [-m1, m2]. Negative i walks the n1 branches of
// the first star from leaf (-m1) to the node next to the centre (-1); positive
// i walks the n2 branches of the second star from the centre outwards. The
// centre is (0, 0). Canonical order is stratum-major: i ascending, then mu.
#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tfs {

struct TfsParams {
    int m1 = 1; // branch length, first star
    int n1 = 1; // branch count, first star
    int m2 = 1;
    int n2 = 1;

    friend bool operator==(const TfsParams&, const TfsParams&) = default;

    // Throws InvalidParameter if any field is < 1.
    void validate() const;

    std::size_t node_count() const;
    std::size_t edge_count() const;
    // m1 + m2 edge orbits, m1 + m2 + 1 vertex strata.
    int orbit_count() const { return m1 + m2; }
    int stratum_count() const { return m1 + m2 + 1; }

    // Parameters with the two stars exchanged.
    TfsParams swapped() const { return {m2, n2, m1, n1}; }

    std::string to_string() const;
};

struct NodeId {
    int i = 0;
    int mu = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Edge {
    NodeId a;
    NodeId b;
};

bool is_valid_node(const TfsParams& params, NodeId node);

// Bijection onto 0..N-1 in canonical order. Throws InvalidNode.
std::size_t node_index(const TfsParams& params, NodeId node);

// Inverse of node_index.
NodeId node_at(const TfsParams& params, std::size_t index);

// Orbit label in [-m1,-1] u [1,m2]. Endpoint order does not matter.
// Throws NotAnEdge.
int edge_orbit(const TfsParams& params, const Edge& edge);

// Orbit labels in canonical order: -m1..-1, 1..m2.
std::vector<int> orbit_labels(const TfsParams& params);

class TfsGraph {
public:
    explicit TfsGraph(const TfsParams& params);

    const TfsParams& params() const { return params_; }
    std::size_t node_count() const { return adjacency_.size(); }

    // Edges sorted by orbit label (orbit -m1 first), then branch index.
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& edge_orbits() const { return edge_orbits_; }

    // Neighbours by canonical index.
    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
    std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
    std::size_t max_degree() const;

    // Nodes of stratum i, in mu order.
    std::vector<NodeId> stratum(int i) const;

    // Orbit label of the edge {u, v} given as canonical indices.
    int orbit_between(std::size_t u, std::size_t v) const;

    bool is_connected() const;

private:
    TfsParams params_;
    std::vector<Edge> edges_;
    std::vector<int> edge_orbits_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

TfsGraph build_topology(const TfsParams& params);

// Degree of every node, indexed canonically.
std::vector<std::size_t> degrees(const TfsGraph& graph);

} // namespace tfs
