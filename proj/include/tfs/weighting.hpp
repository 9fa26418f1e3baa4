// weighting.hpp: orbit weights, weight-matrix assembly and comparison schemes.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "tfs/topology.hpp"

namespace tfs {

// One weight per edge orbit. Labels -m1..-1, 1..m2.
class OrbitWeights {
public:
    OrbitWeights() = default;
    explicit OrbitWeights(const TfsParams& params, double fill = 0.0);

    const TfsParams& params() const { return params_; }

    // Throws MissingOrbitWeight for labels outside the orbit range.
    double at(int label) const;
    double& at(int label);
    double operator[](int label) const { return at(label); }

    bool all_finite() const;

    // Labels in canonical order with their weights.
    std::vector<std::pair<int, double>> entries() const;

private:
    std::size_t slot(int label) const;

    TfsParams params_;
    std::vector<double> w_; // index label+m1 for label<0, label+m1-1 for label>0
};

// Builds weights from an explicit label map. Throws MissingOrbitWeight if any
// orbit is absent or an unknown label is present.
OrbitWeights orbit_weights_from_map(const TfsParams& params, const std::map<int, double>& w);

// Dense symmetric weight matrix in canonical node order.
struct WeightMatrix {
    TfsParams params;
    Eigen::MatrixXd entries;
};

WeightMatrix assemble_weight_matrix(const TfsParams& params, const OrbitWeights& ow);

enum class MaxDegreeConvention { inv_dmax, inv_dmax_plus_1 };
enum class MetropolisConvention {
    inv_one_plus_max, // 1 / (1 + max(d_a, d_b)), the standard form
    inv_max,          // 1 / max(d_a, d_b)
};

// Orbit-level forms of the comparison schemes. Every scheme here assigns the
// same weight to all edges of an orbit, so the stratified path applies.
OrbitWeights max_degree_orbit_weights(const TfsGraph& graph, MaxDegreeConvention convention);
OrbitWeights metropolis_orbit_weights(const TfsGraph& graph,
                                      MetropolisConvention convention =
                                          MetropolisConvention::inv_one_plus_max);
OrbitWeights best_constant_orbit_weights(const TfsGraph& graph);

// Constant-step factor 2 / (lambda_max(L) + lambda_2nd_smallest(L)).
double best_constant_step(const TfsParams& params);

WeightMatrix max_degree_weights(const TfsGraph& graph, MaxDegreeConvention convention);
WeightMatrix metropolis_weights(const TfsGraph& graph,
                                MetropolisConvention convention =
                                    MetropolisConvention::inv_one_plus_max);
WeightMatrix best_constant_weights(const TfsGraph& graph);

// Graph Laplacian, dense.
Eigen::MatrixXd laplacian(const TfsGraph& graph);

struct StochasticReport {
    double max_row_sum_deviation = 0.0;
    double max_asymmetry = 0.0;
    std::size_t sparsity_violations = 0;

    bool ok(double tol = 1e-12) const {
        return max_row_sum_deviation <= tol && max_asymmetry <= tol && sparsity_violations == 0;
    }
};

StochasticReport validate_stochastic(const WeightMatrix& w);

} // namespace tfs
