#include "tfs/topology.hpp"

#include <algorithm>
#include <queue>

#include "tfs/errors.hpp"

namespace tfs {

void TfsParams::validate() const {
    if (m1 < 1 || n1 < 1 || m2 < 1 || n2 < 1) {
        throw InvalidParameter("TFS parameters must all be >= 1, got " + to_string());
    }
}

std::size_t TfsParams::node_count() const {
    return static_cast<std::size_t>(m1) * n1 + static_cast<std::size_t>(m2) * n2 + 1;
}

std::size_t TfsParams::edge_count() const { return node_count() - 1; }

std::string TfsParams::to_string() const {
    return "(m1=" + std::to_string(m1) + ", n1=" + std::to_string(n1) +
           ", m2=" + std::to_string(m2) + ", n2=" + std::to_string(n2) + ")";
}

bool is_valid_node(const TfsParams& p, NodeId node) {
    if (node.i == 0) return node.mu == 0;
    if (node.i < 0) return node.i >= -p.m1 && node.mu >= 1 && node.mu <= p.n1;
    return node.i <= p.m2 && node.mu >= 1 && node.mu <= p.n2;
}

std::size_t node_index(const TfsParams& p, NodeId node) {
    if (!is_valid_node(p, node)) {
        throw InvalidNode("node (" + std::to_string(node.i) + ", " + std::to_string(node.mu) +
                          ") is not in TFS " + p.to_string());
    }
    const auto left = static_cast<std::size_t>(p.m1) * p.n1;
    if (node.i < 0) {
        return static_cast<std::size_t>(node.i + p.m1) * p.n1 + (node.mu - 1);
    }
    if (node.i == 0) return left;
    return left + 1 + static_cast<std::size_t>(node.i - 1) * p.n2 + (node.mu - 1);
}

NodeId node_at(const TfsParams& p, std::size_t index) {
    const auto left = static_cast<std::size_t>(p.m1) * p.n1;
    if (index < left) {
        return {static_cast<int>(index / p.n1) - p.m1, static_cast<int>(index % p.n1) + 1};
    }
    if (index == left) return {0, 0};
    const std::size_t r = index - left - 1;
    if (r >= static_cast<std::size_t>(p.m2) * p.n2) {
        throw InvalidNode("index " + std::to_string(index) + " out of range for " + p.to_string());
    }
    return {static_cast<int>(r / p.n2) + 1, static_cast<int>(r % p.n2) + 1};
}

int edge_orbit(const TfsParams& p, const Edge& edge) {
    if (!is_valid_node(p, edge.a) || !is_valid_node(p, edge.b)) {
        throw NotAnEdge("edge endpoint outside TFS " + p.to_string());
    }
    NodeId lo = std::min(edge.a, edge.b);
    NodeId hi = std::max(edge.a, edge.b);
    // Branch edges join consecutive strata on the same branch; the centre
    // joins every stratum +-1 node.
    if (hi.i != lo.i + 1) throw NotAnEdge("endpoints are not in adjacent strata");
    if (lo.i == 0 || hi.i == 0) return lo.i == 0 ? 1 : -1;
    if (lo.mu != hi.mu) throw NotAnEdge("endpoints lie on different branches");
    return lo.i < 0 ? lo.i : hi.i;
}

std::vector<int> orbit_labels(const TfsParams& p) {
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(p.m1 + p.m2));
    for (int i = -p.m1; i <= -1; ++i) labels.push_back(i);
    for (int i = 1; i <= p.m2; ++i) labels.push_back(i);
    return labels;
}

TfsGraph::TfsGraph(const TfsParams& params) : params_(params) {
    params_.validate();
    const auto& p = params_;
    adjacency_.assign(p.node_count(), {});
    edges_.reserve(p.edge_count());
    edge_orbits_.reserve(p.edge_count());

    auto add = [&](NodeId a, NodeId b, int orbit) {
        const auto ia = node_index(p, a);
        const auto ib = node_index(p, b);
        edges_.push_back({a, b});
        edge_orbits_.push_back(orbit);
        adjacency_[ia].push_back(ib);
        adjacency_[ib].push_back(ia);
    };

    for (int i = -p.m1; i <= -2; ++i)
        for (int mu = 1; mu <= p.n1; ++mu) add({i, mu}, {i + 1, mu}, i);
    for (int mu = 1; mu <= p.n1; ++mu) add({-1, mu}, {0, 0}, -1);
    for (int eta = 1; eta <= p.n2; ++eta) add({0, 0}, {1, eta}, 1);
    for (int i = 2; i <= p.m2; ++i)
        for (int eta = 1; eta <= p.n2; ++eta) add({i - 1, eta}, {i, eta}, i);

    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::size_t TfsGraph::max_degree() const {
    std::size_t d = 0;
    for (const auto& nb : adjacency_) d = std::max(d, nb.size());
    return d;
}

std::vector<NodeId> TfsGraph::stratum(int i) const {
    if (i < -params_.m1 || i > params_.m2) {
        throw InvalidParameter("stratum " + std::to_string(i) + " out of range");
    }
    if (i == 0) return {{0, 0}};
    const int count = i < 0 ? params_.n1 : params_.n2;
    std::vector<NodeId> nodes;
    nodes.reserve(static_cast<std::size_t>(count));
    for (int mu = 1; mu <= count; ++mu) nodes.push_back({i, mu});
    return nodes;
}

int TfsGraph::orbit_between(std::size_t u, std::size_t v) const {
    return edge_orbit(params_, {node_at(params_, u), node_at(params_, v)});
}

bool TfsGraph::is_connected() const {
    std::vector<bool> seen(adjacency_.size(), false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto v = frontier.front();
        frontier.pop();
        for (auto u : adjacency_[v]) {
            if (!seen[u]) {
                seen[u] = true;
                ++reached;
                frontier.push(u);
            }
        }
    }
    return reached == adjacency_.size();
}

TfsGraph build_topology(const TfsParams& params) { return TfsGraph(params); }

std::vector<std::size_t> degrees(const TfsGraph& graph) {
    std::vector<std::size_t> d(graph.node_count());
    for (std::size_t v = 0; v < d.size(); ++v) d[v] = graph.degree(v);
    return d;
}

} // namespace tfs
