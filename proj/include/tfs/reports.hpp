// reports.hpp: the data behind the CLI. Solve/compare reports, certificate
// verification, parameter sweeps and simulation runs, plus their JSON / CSV
// serializations.
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tfs/consensus.hpp"
#include "tfs/optimizer.hpp"
#include "tfs/topology.hpp"
#include "tfs/weighting.hpp"

namespace tfs {

enum class Scheme { optimal, max_degree, metropolis, best_constant };

// "optimal", "max-degree", "metropolis", "best-constant".
std::string scheme_name(Scheme scheme);
// Throws InvalidParameter for unknown names.
Scheme parse_scheme(const std::string& name);

struct SolveOptions {
    RootScanOptions scan;
    MaxDegreeConvention max_degree = MaxDegreeConvention::inv_dmax;
    MetropolisConvention metropolis = MetropolisConvention::inv_one_plus_max;
};

std::string convention_name(MaxDegreeConvention c); // "dmax", "dmax+1"
std::string convention_name(MetropolisConvention c); // "1+max", "max"
MaxDegreeConvention parse_max_degree_convention(const std::string& name);
MetropolisConvention parse_metropolis_convention(const std::string& name);

// Orbit weights of a scheme. optimal requires n1, n2 >= 2.
OrbitWeights scheme_weights(const TfsParams& params, Scheme scheme, const SolveOptions& options = {});

struct CertificateSummary {
    double r1 = 0, r2 = 0, r3 = 0, r4 = 0, r5 = 0, r6 = 0, r7 = 0;
    double duality_gap = 0;
    double recurrence_max = 0;
    double proportionality = 0;
    double ratio_consistency = 0;
    bool passes = false;
};

CertificateSummary summarize(const CertificateReport& report);

struct SolveReport {
    TfsParams params;
    std::string scheme;
    std::string convention; // empty for optimal and best-constant
    std::vector<std::pair<int, double>> weights;
    double slem = 0.0;
    double lambda2 = 0.0;
    double lambda_min = 0.0;
    std::optional<double> theta_star;              // optimal only
    std::optional<CertificateSummary> certificate; // optimal only
};

SolveReport solve(const TfsParams& params, Scheme scheme, const SolveOptions& options = {});

// JSON with every number rounded to 10 significant digits.
std::string to_json(const SolveReport& report);
// Throws InvalidParameter on malformed input.
SolveReport solve_report_from_json(const std::string& text);

// One report per scheme, optimal first.
std::vector<SolveReport> compare(const TfsParams& params, const SolveOptions& options = {});
void write_compare_csv(std::ostream& out, const std::vector<SolveReport>& rows);

struct VerifyResult {
    OptimalSolution solution;
    CertificateReport report;
    double perturbation = 0.0;
};

// Certificate for the optimum, checked against weights with w_{-1} shifted
// by perturbation (0 checks the optimum itself).
VerifyResult verify(const TfsParams& params, double perturbation = 0.0, const SolveOptions& options = {});
void write_verify_text(std::ostream& out, const VerifyResult& result);

// --- sweeps -------------------------------------------------------------

struct IntRange {
    int lo = 1;
    int hi = 1;
    // Throws InvalidParameter when empty or below 1.
    std::vector<int> values(const char* name) const;
};

enum class SweepValue { slem, w_minus1 };
std::string sweep_value_name(SweepValue v); // "slem", "w_minus1"
SweepValue parse_sweep_value(const std::string& name);

struct SweepGrid {
    int n1 = 0;
    int n2 = 0;
    SweepValue value = SweepValue::slem;
    std::vector<int> m1_values;
    std::vector<int> m2_values;
    std::vector<double> cells; // row-major: m1 rows, m2 columns

    double at(std::size_t row, std::size_t col) const { return cells.at(row * m2_values.size() + col); }
};

// Optimal-scheme grid over (m1, m2). threads = 0 picks the hardware count.
SweepGrid sweep_grid(int n1, int n2, const IntRange& m1, const IntRange& m2, SweepValue value,
                     const SolveOptions& options = {}, unsigned threads = 0);

struct Fig2Row {
    int m_bar = 0;
    int m1 = 0; // star rows: m1 = m2 = m_bar
    int m2 = 0;
    bool star = false;
    double slem = 0.0;
};

// Every (m1, m2) with (m1 n1 + m2 n2)/(n1 + n2) = m_bar for integer m_bar in
// range, followed by the symmetric star with n1 + n2 branches of length m_bar.
std::vector<Fig2Row> sweep_fig2(int n1, int n2, const IntRange& m_bar, const SolveOptions& options = {},
                                unsigned threads = 0);

void write_sweep_csv(std::ostream& out, const SweepGrid& grid);
void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows);

struct Fig2Properties {
    std::size_t columns = 0;
    std::size_t violations = 0; // TFS rows beating the star of their column
    bool ok() const { return columns > 0 && violations == 0; }
};

// Star SLEM <= every TFS SLEM in the same m_bar column, with slack 1e-12.
Fig2Properties check_fig2(const std::vector<Fig2Row>& rows);

struct GridProperties {
    bool increasing_m1 = false;
    bool increasing_m2 = false;
    bool decreasing_m2 = false;
    // Along-m2 differences summed over each line m1 = k exceed the along-m1
    // ones over m2 = k, for every shared k.
    bool line_dominance = false;
    // value(a, b) > value(b, a) for every shared a < b.
    bool swap_dominance = false;
    std::size_t pointwise_cells = 0;
    std::size_t pointwise_failures = 0; // cells where the m2 step is not larger
};

GridProperties check_grid(const SweepGrid& grid);

// --- simulation ---------------------------------------------------------

struct SimulationResult {
    Trajectory trajectory;
    std::optional<double> factor; // absent when the tail has no signal
    std::string factor_note;      // reason when absent
};

SimulationResult run_simulation(const TfsParams& params, Scheme scheme, int steps, std::uint64_t seed,
                                const SolveOptions& options = {}, int tail = 50);

// Trajectory CSV followed by "# convergence_factor_estimate,<value>".
void write_simulation_csv(std::ostream& out, const SimulationResult& result);

} // namespace tfs
