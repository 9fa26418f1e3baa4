#include "tfs/consensus.hpp"

#include <cmath>
#include <random>

#include "tfs/errors.hpp"
#include "tfs/format.hpp"

namespace tfs {

namespace {

struct Recorder {
    Trajectory traj;
    double sum0 = 0.0;
    bool keep = true;

    Recorder(const Eigen::VectorXd& x0, int steps, bool keep_states) : keep(keep_states) {
        const auto n = static_cast<double>(x0.size());
        sum0 = x0.sum();
        traj.x_bar = Eigen::VectorXd::Constant(x0.size(), sum0 / n);
        const auto len = static_cast<std::size_t>(steps) + 1;
        traj.error_norms.reserve(len);
        traj.sum_deviation.reserve(len);
        if (keep) traj.states.reserve(len);
    }

    void record(const Eigen::VectorXd& x) {
        traj.error_norms.push_back((x - traj.x_bar).norm());
        traj.sum_deviation.push_back(std::abs(x.sum() - sum0));
        if (keep) traj.states.push_back(x);
    }
};

void check_inputs(std::size_t n, const Eigen::VectorXd& x0, int steps) {
    if (static_cast<std::size_t>(x0.size()) != n) {
        throw DimensionMismatch("x0 has " + std::to_string(x0.size()) + " entries, expected " + std::to_string(n));
    }
    if (steps < 0) throw InvalidParameter("steps must be >= 0");
}

} // namespace

Trajectory iterate(const WeightMatrix& w, const Eigen::VectorXd& x0, int steps, const IterateOptions& options) {
    if (w.entries.rows() != w.entries.cols()) throw DimensionMismatch("weight matrix is not square");
    check_inputs(static_cast<std::size_t>(w.entries.rows()), x0, steps);
    Recorder rec(x0, steps, options.keep_states);
    Eigen::VectorXd x = x0;
    rec.record(x);
    for (int t = 0; t < steps; ++t) {
        x = w.entries * x;
        rec.record(x);
    }
    return std::move(rec.traj);
}

std::vector<NodeGather> gather_plan(const TfsGraph& graph, const OrbitWeights& ow) {
    const auto& p = graph.params();
    if (!(ow.params() == p)) throw MissingOrbitWeight("orbit weights do not belong to " + p.to_string());
    std::vector<NodeGather> plan(graph.node_count());
    for (std::size_t a = 0; a < plan.size(); ++a) {
        auto& g = plan[a];
        double incident = 0.0;
        for (auto b : graph.neighbors(a)) {
            const double x = ow.at(graph.orbit_between(a, b));
            g.terms.emplace_back(b, x);
            incident += x;
        }
        g.self_weight = 1.0 - incident;
    }
    return plan;
}

Trajectory distributed_iterate(const TfsGraph& graph, const OrbitWeights& ow, const Eigen::VectorXd& x0,
                               int steps, const IterateOptions& options) {
    check_inputs(graph.node_count(), x0, steps);
    const auto plan = gather_plan(graph, ow);
    Recorder rec(x0, steps, options.keep_states);
    Eigen::VectorXd x = x0;
    Eigen::VectorXd next(x.size());
    rec.record(x);
    for (int t = 0; t < steps; ++t) {
        for (std::size_t a = 0; a < plan.size(); ++a) {
            const auto& g = plan[a];
            double acc = g.self_weight * x(static_cast<Eigen::Index>(a));
            for (const auto& [b, wt] : g.terms) acc += wt * x(static_cast<Eigen::Index>(b));
            next(static_cast<Eigen::Index>(a)) = acc;
        }
        x.swap(next);
        rec.record(x);
    }
    return std::move(rec.traj);
}

Eigen::VectorXd random_x0(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = dist(rng);
    return x;
}

Trajectory simulate(const TfsGraph& graph, const OrbitWeights& ow, int steps, std::uint64_t seed,
                    const IterateOptions& options) {
    auto traj = distributed_iterate(graph, ow, random_x0(graph.node_count(), seed), steps, options);
    traj.seed = seed;
    return traj;
}

double convergence_factor_estimate(const Trajectory& traj, int tail) {
    if (tail < 2) throw PreconditionViolation("tail must be at least 2 steps");
    const auto& e = traj.error_norms;
    if (e.size() < static_cast<std::size_t>(tail) + 1) {
        throw PreconditionViolation("trajectory has " + std::to_string(e.size() ? e.size() - 1 : 0) +
                                    " steps, tail needs " + std::to_string(tail));
    }
    const std::size_t first = e.size() - 1 - static_cast<std::size_t>(tail);
    for (std::size_t t = first; t < e.size(); ++t) {
        if (!(e[t] >= kSignalFloor)) {
            throw InsufficientSignal("error norm " + format_number(e[t]) + " at step " + std::to_string(t) +
                                     " is below " + format_number(kSignalFloor));
        }
    }
    return std::exp((std::log(e.back()) - std::log(e[first])) / tail);
}

double log_error_slope(const Trajectory& traj, std::size_t first, std::size_t last) {
    const auto& e = traj.error_norms;
    if (last >= e.size() || last <= first) throw PreconditionViolation("bad regression window");
    double st = 0, sy = 0, stt = 0, sty = 0;
    const auto n = static_cast<double>(last - first + 1);
    for (std::size_t t = first; t <= last; ++t) {
        if (!(e[t] > 0.0)) throw InsufficientSignal("zero error norm in regression window");
        const double x = static_cast<double>(t);
        const double y = std::log(e[t]);
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,error_norm,sum_deviation\n";
    for (std::size_t t = 0; t < traj.error_norms.size(); ++t) {
        out << t << ',' << format_number(traj.error_norms[t]) << ',' << format_number(traj.sum_deviation[t])
            << '\n';
    }
}

} // namespace tfs
