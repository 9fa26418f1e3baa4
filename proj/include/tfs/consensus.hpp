// consensus.hpp: the averaging iteration x(t+1) = W x(t), run either as a
// matrix recurrence or node by node from neighbour values.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "tfs/topology.hpp"
#include "tfs/weighting.hpp"

namespace tfs {

struct Trajectory {
    std::vector<Eigen::VectorXd> states; // x(0..T); empty when not kept
    std::vector<double> error_norms;     // ||x(t) - x_bar||, t = 0..T
    std::vector<double> sum_deviation;   // |1^T x(t) - 1^T x(0)|
    Eigen::VectorXd x_bar;
    std::optional<std::uint64_t> seed;   // set when x0 came from random_x0
};

struct IterateOptions {
    bool keep_states = true;
};

// Throws DimensionMismatch if x0 does not match W, InvalidParameter if steps < 0.
Trajectory iterate(const WeightMatrix& w, const Eigen::VectorXd& x0, int steps,
                   const IterateOptions& options = {});

// What one node reads each round: its own weight and one (neighbour, weight)
// term per incident edge.
struct NodeGather {
    double self_weight = 0.0;
    std::vector<std::pair<std::size_t, double>> terms;

    std::size_t message_count() const { return terms.size(); }
    std::size_t term_count() const { return terms.size() + 1; }
};

std::vector<NodeGather> gather_plan(const TfsGraph& graph, const OrbitWeights& ow);

// Same recurrence without forming W. Works for any N the graph allows.
Trajectory distributed_iterate(const TfsGraph& graph, const OrbitWeights& ow, const Eigen::VectorXd& x0,
                               int steps, const IterateOptions& options = {});

// Uniform entries in [-1, 1) from mt19937_64(seed).
Eigen::VectorXd random_x0(std::size_t n, std::uint64_t seed);

// Trajectory with x0 = random_x0(seed) and the seed recorded.
Trajectory simulate(const TfsGraph& graph, const OrbitWeights& ow, int steps, std::uint64_t seed,
                    const IterateOptions& options = {});

inline constexpr double kSignalFloor = 1e-13;

// Geometric-mean step ratio over the last `tail` steps. Throws
// PreconditionViolation if tail < 2 or the run is shorter than tail, and
// InsufficientSignal if any error norm in the window is below kSignalFloor.
double convergence_factor_estimate(const Trajectory& traj, int tail = 50);

// Slope of log(error_norm) against t over [first, last] (least squares).
double log_error_slope(const Trajectory& traj, std::size_t first, std::size_t last);

// Header t,error_norm,sum_deviation then one row per step.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

} // namespace tfs
