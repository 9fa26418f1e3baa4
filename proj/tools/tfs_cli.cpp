// tfs: command-line front end for the TFS weight optimizer.
//
//   tfs solve    --m1 3 --n1 4 --m2 4 --n2 3 [--scheme optimal]
//   tfs compare  --m1 3 --n1 4 --m2 4 --n2 3
//   tfs verify   --m1 3 --n1 4 --m2 4 --n2 3 [--perturb 0.01]
//   tfs sweep    --kind fig3
//   tfs simulate --m1 3 --n1 4 --m2 4 --n2 3 --steps 500 --seed 1
//
// Exit codes: 0 ok, 1 verification failed, 2 bad input.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "tfs/errors.hpp"
#include "tfs/reports.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

struct Args {
    tfs::TfsParams params{0, 0, 0, 0};
    std::string scheme = "optimal";
    double tol = 1e-12;
    std::size_t grid = 0;
    std::string max_degree_convention = "dmax";
    std::string metropolis_convention = "1+max";
    double perturb = 0.0;
    int steps = 500;
    std::uint64_t seed = 1;
    int tail = 50;
    std::string kind;
    std::string value = "slem";
    int n1 = 0, n2 = 0;
    tfs::IntRange m1_range{1, 10}, m2_range{1, 10}, m_bar{1, 8};
    unsigned threads = 0;
};

void add_params(CLI::App* cmd, Args& a) {
    cmd->add_option("--m1", a.params.m1, "branch length of the first star")->required();
    cmd->add_option("--n1", a.params.n1, "branch count of the first star")->required();
    cmd->add_option("--m2", a.params.m2, "branch length of the second star")->required();
    cmd->add_option("--n2", a.params.n2, "branch count of the second star")->required();
}

void add_range(CLI::App* cmd, const std::string& name, tfs::IntRange& r) {
    cmd->add_option("--" + name + "-min", r.lo);
    cmd->add_option("--" + name + "-max", r.hi);
}

tfs::SolveOptions solve_options(const Args& a) {
    tfs::SolveOptions o;
    o.scan.tol = a.tol;
    o.scan.grid_points = a.grid;
    o.max_degree = tfs::parse_max_degree_convention(a.max_degree_convention);
    o.metropolis = tfs::parse_metropolis_convention(a.metropolis_convention);
    return o;
}

void require_optimal_preconditions(const tfs::TfsParams& p) {
    p.validate();
    if (p.n1 < 2 || p.n2 < 2) {
        throw tfs::PreconditionViolation("the optimal scheme requires n1 >= 2 and n2 >= 2 (got n1 = " +
                                         std::to_string(p.n1) + ", n2 = " + std::to_string(p.n2) + ")");
    }
}

int run_solve(const Args& a) {
    const auto scheme = tfs::parse_scheme(a.scheme);
    if (scheme == tfs::Scheme::optimal) require_optimal_preconditions(a.params);
    std::cout << tfs::to_json(tfs::solve(a.params, scheme, solve_options(a))) << '\n';
    return kOk;
}

int run_compare(const Args& a) {
    require_optimal_preconditions(a.params);
    const auto rows = tfs::compare(a.params, solve_options(a));
    tfs::write_compare_csv(std::cout, rows);
    for (const auto& r : rows) {
        if (r.slem < rows.front().slem) {
            std::cerr << "error: " << r.scheme << " beats the optimal SLEM\n";
            return kFailed;
        }
    }
    return kOk;
}

int run_verify(const Args& a) {
    require_optimal_preconditions(a.params);
    const auto res = tfs::verify(a.params, a.perturb, solve_options(a));
    tfs::write_verify_text(std::cout, res);
    return res.report.passes() ? kOk : kFailed;
}

int run_sweep(const Args& a, const CLI::App* cmd) {
    const auto opts = solve_options(a);
    const bool custom = a.kind == "custom";
    if (!custom && (cmd->count("--n1") || cmd->count("--n2") || cmd->count("--value"))) {
        throw tfs::InvalidParameter("--n1, --n2 and --value apply only to --kind custom");
    }
    if (a.kind == "fig2") {
        const auto rows = tfs::sweep_fig2(6, 12, a.m_bar, opts, a.threads);
        tfs::write_fig2_csv(std::cout, rows);
        return kOk;
    }
    tfs::SweepGrid grid;
    if (a.kind == "fig3") {
        grid = tfs::sweep_grid(2, 22, a.m1_range, a.m2_range, tfs::SweepValue::slem, opts, a.threads);
    } else if (a.kind == "fig4") {
        grid = tfs::sweep_grid(2, 22, a.m1_range, a.m2_range, tfs::SweepValue::w_minus1, opts, a.threads);
    } else if (custom) {
        if (a.n1 < 2 || a.n2 < 2) throw tfs::PreconditionViolation("custom sweeps need --n1 >= 2 and --n2 >= 2");
        grid = tfs::sweep_grid(a.n1, a.n2, a.m1_range, a.m2_range, tfs::parse_sweep_value(a.value), opts,
                               a.threads);
    } else {
        throw tfs::InvalidParameter("unknown sweep kind '" + a.kind + "'");
    }
    tfs::write_sweep_csv(std::cout, grid);
    return kOk;
}

int run_simulate(const Args& a) {
    const auto scheme = tfs::parse_scheme(a.scheme);
    if (scheme == tfs::Scheme::optimal) require_optimal_preconditions(a.params);
    const auto res = tfs::run_simulation(a.params, scheme, a.steps, a.seed, solve_options(a), a.tail);
    tfs::write_simulation_csv(std::cout, res);
    if (!res.factor) std::cerr << "note: no convergence factor: " << res.factor_note << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal consensus weights for two-fused-star networks"};
    app.require_subcommand(1);
    Args a;
    app.add_option("--tol", a.tol, "root-finder theta tolerance")->capture_default_str();
    app.add_option("--grid", a.grid, "root-scan grid points (0 = automatic)");
    app.add_option("--max-degree-convention", a.max_degree_convention, "dmax or dmax+1")->capture_default_str();
    app.add_option("--metropolis-convention", a.metropolis_convention, "1+max or max")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "weights and spectrum of one scheme, as JSON");
    add_params(solve, a);
    solve->add_option("--scheme", a.scheme, "optimal, max-degree, metropolis or best-constant");

    auto* cmp = app.add_subcommand("compare", "SLEM of all four schemes, as CSV");
    add_params(cmp, a);

    auto* ver = app.add_subcommand("verify", "check the optimality certificate");
    add_params(ver, a);
    ver->add_option("--perturb", a.perturb, "shift w_-1 by this amount before checking");

    auto* sweep = app.add_subcommand("sweep", "figure data as long-format CSV");
    sweep->add_option("--kind", a.kind, "fig2, fig3, fig4 or custom")->required();
    sweep->add_option("--n1", a.n1, "custom only");
    sweep->add_option("--n2", a.n2, "custom only");
    sweep->add_option("--value", a.value, "custom only: slem or w_minus1");
    add_range(sweep, "m1", a.m1_range);
    add_range(sweep, "m2", a.m2_range);
    add_range(sweep, "mbar", a.m_bar);
    sweep->add_option("--threads", a.threads, "worker threads (0 = all cores)");

    auto* sim = app.add_subcommand("simulate", "run the averaging iteration, trajectory as CSV");
    add_params(sim, a);
    sim->add_option("--scheme", a.scheme, "optimal, max-degree, metropolis or best-constant");
    sim->add_option("--steps", a.steps, "number of rounds")->capture_default_str();
    sim->add_option("--seed", a.seed, "seed for the random initial state")->capture_default_str();
    sim->add_option("--tail", a.tail, "steps in the convergence-factor window")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }

    try {
        if (*solve) return run_solve(a);
        if (*cmp) return run_compare(a);
        if (*ver) return run_verify(a);
        if (*sweep) return run_sweep(a, sweep);
        if (*sim) return run_simulate(a);
    } catch (const tfs::NumericalFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    } catch (const tfs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}
