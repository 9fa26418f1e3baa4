#include "tfs/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "tfs/errors.hpp"
#include "tfs/spectral.hpp"

namespace tfs {

OrbitWeights::OrbitWeights(const TfsParams& params, double fill) : params_(params) {
    params_.validate();
    w_.assign(static_cast<std::size_t>(params_.m1 + params_.m2), fill);
}

std::size_t OrbitWeights::slot(int label) const {
    if (label < -params_.m1 || label > params_.m2 || label == 0 || w_.empty()) {
        throw MissingOrbitWeight("no weight for orbit " + std::to_string(label) + " in " +
                                 params_.to_string());
    }
    return static_cast<std::size_t>(label < 0 ? label + params_.m1 : label + params_.m1 - 1);
}

double OrbitWeights::at(int label) const { return w_[slot(label)]; }
double& OrbitWeights::at(int label) { return w_[slot(label)]; }

bool OrbitWeights::all_finite() const {
    return std::all_of(w_.begin(), w_.end(), [](double x) { return std::isfinite(x); });
}

std::vector<std::pair<int, double>> OrbitWeights::entries() const {
    std::vector<std::pair<int, double>> out;
    out.reserve(w_.size());
    for (int label : orbit_labels(params_)) out.emplace_back(label, at(label));
    return out;
}

OrbitWeights orbit_weights_from_map(const TfsParams& params, const std::map<int, double>& w) {
    OrbitWeights ow(params);
    for (int label : orbit_labels(params)) {
        auto it = w.find(label);
        if (it == w.end()) {
            throw MissingOrbitWeight("missing weight for orbit " + std::to_string(label));
        }
        ow.at(label) = it->second;
    }
    if (w.size() != static_cast<std::size_t>(params.orbit_count())) {
        throw MissingOrbitWeight("unexpected orbit labels for " + params.to_string());
    }
    return ow;
}

WeightMatrix assemble_weight_matrix(const TfsParams& params, const OrbitWeights& ow) {
    if (!(ow.params() == params)) {
        throw MissingOrbitWeight("orbit weights were built for " + ow.params().to_string() +
                                 ", not " + params.to_string());
    }
    if (!ow.all_finite()) throw InvalidParameter("orbit weights must be finite");

    const TfsGraph graph(params);
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    WeightMatrix w{params, Eigen::MatrixXd::Identity(n, n)};
    const auto& edges = graph.edges();
    const auto& orbits = graph.edge_orbits();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto a = static_cast<Eigen::Index>(node_index(params, edges[e].a));
        const auto b = static_cast<Eigen::Index>(node_index(params, edges[e].b));
        const double x = ow.at(orbits[e]);
        w.entries(a, b) = x;
        w.entries(b, a) = x;
        // Diagonal is 1 minus the incident edge weights, which reproduces the
        // leaf, interior and centre cases of the orbit formula.
        w.entries(a, a) -= x;
        w.entries(b, b) -= x;
    }
    return w;
}

OrbitWeights max_degree_orbit_weights(const TfsGraph& graph, MaxDegreeConvention convention) {
    const auto dmax = static_cast<double>(graph.max_degree());
    const double alpha = convention == MaxDegreeConvention::inv_dmax ? 1.0 / dmax : 1.0 / (dmax + 1.0);
    return OrbitWeights(graph.params(), alpha);
}

OrbitWeights metropolis_orbit_weights(const TfsGraph& graph, MetropolisConvention convention) {
    const auto& p = graph.params();
    OrbitWeights ow(p);
    // Endpoint degrees are constant along an orbit, so every edge of the
    // orbit writes the same value.
    const auto& edges = graph.edges();
    const auto& orbits = graph.edge_orbits();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto da = graph.degree(node_index(p, edges[e].a));
        const auto db = graph.degree(node_index(p, edges[e].b));
        const auto d = static_cast<double>(std::max(da, db));
        ow.at(orbits[e]) = convention == MetropolisConvention::inv_one_plus_max ? 1.0 / (1.0 + d) : 1.0 / d;
    }
    return ow;
}

double best_constant_step(const TfsParams& params) {
    // W(all ones) = I - L, so the Laplacian spectrum is 1 - spec(W(1)) and
    // comes out of the stratified blocks without forming L.
    const auto report = block_spectrum(build_blocks(params, OrbitWeights(params, 1.0)));
    if (report.total_count() < 2) throw PreconditionViolation("best-constant weights need N >= 2");
    const double lap_max = 1.0 - report.lambda_min;
    const double lap_second_smallest = 1.0 - report.lambda2;
    const double denom = lap_max + lap_second_smallest;
    if (!(denom > 0.0)) throw NumericalFailure("degenerate Laplacian spectrum");
    return 2.0 / denom;
}

OrbitWeights best_constant_orbit_weights(const TfsGraph& graph) {
    return OrbitWeights(graph.params(), best_constant_step(graph.params()));
}

WeightMatrix max_degree_weights(const TfsGraph& graph, MaxDegreeConvention convention) {
    return assemble_weight_matrix(graph.params(), max_degree_orbit_weights(graph, convention));
}

WeightMatrix metropolis_weights(const TfsGraph& graph, MetropolisConvention convention) {
    const auto& p = graph.params();
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    WeightMatrix w{p, Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index a = 0; a < n; ++a) {
        double off = 0.0;
        for (auto b : graph.neighbors(static_cast<std::size_t>(a))) {
            const auto d = static_cast<double>(
                std::max(graph.degree(static_cast<std::size_t>(a)), graph.degree(b)));
            const double x = convention == MetropolisConvention::inv_one_plus_max ? 1.0 / (1.0 + d) : 1.0 / d;
            w.entries(a, static_cast<Eigen::Index>(b)) = x;
            off += x;
        }
        w.entries(a, a) = 1.0 - off;
    }
    return w;
}

WeightMatrix best_constant_weights(const TfsGraph& graph) {
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    const double alpha = best_constant_step(graph.params());
    WeightMatrix w{graph.params(), Eigen::MatrixXd::Identity(n, n) - alpha * laplacian(graph)};
    return w;
}

Eigen::MatrixXd laplacian(const TfsGraph& graph) {
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto& nb = graph.neighbors(static_cast<std::size_t>(a));
        l(a, a) = static_cast<double>(nb.size());
        for (auto b : nb) l(a, static_cast<Eigen::Index>(b)) = -1.0;
    }
    return l;
}

StochasticReport validate_stochastic(const WeightMatrix& w) {
    StochasticReport r;
    const auto& m = w.entries;
    const TfsGraph graph(w.params);
    if (m.rows() != static_cast<Eigen::Index>(graph.node_count()) || m.cols() != m.rows()) {
        throw DimensionMismatch("weight matrix shape does not match " + w.params.to_string());
    }
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        r.max_row_sum_deviation = std::max(r.max_row_sum_deviation, std::abs(m.row(a).sum() - 1.0));
        const auto& nb = graph.neighbors(static_cast<std::size_t>(a));
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            r.max_asymmetry = std::max(r.max_asymmetry, std::abs(m(a, b) - m(b, a)));
            if (a != b && m(a, b) != 0.0 &&
                !std::binary_search(nb.begin(), nb.end(), static_cast<std::size_t>(b))) {
                ++r.sparsity_violations;
            }
        }
    }
    return r;
}

} // namespace tfs
