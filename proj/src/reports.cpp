#include "tfs/reports.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "tfs/errors.hpp"
#include "tfs/format.hpp"
#include "tfs/spectral.hpp"

namespace tfs {

using json = nlohmann::ordered_json;

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
    case Scheme::optimal: return "optimal";
    case Scheme::max_degree: return "max-degree";
    case Scheme::metropolis: return "metropolis";
    case Scheme::best_constant: return "best-constant";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::optimal, Scheme::max_degree, Scheme::metropolis, Scheme::best_constant}) {
        if (scheme_name(s) == name) return s;
    }
    throw InvalidParameter("unknown scheme '" + name + "'");
}

std::string convention_name(MaxDegreeConvention c) {
    return c == MaxDegreeConvention::inv_dmax ? "dmax" : "dmax+1";
}

std::string convention_name(MetropolisConvention c) {
    return c == MetropolisConvention::inv_one_plus_max ? "1+max" : "max";
}

MaxDegreeConvention parse_max_degree_convention(const std::string& name) {
    if (name == "dmax") return MaxDegreeConvention::inv_dmax;
    if (name == "dmax+1") return MaxDegreeConvention::inv_dmax_plus_1;
    throw InvalidParameter("unknown max-degree convention '" + name + "'");
}

MetropolisConvention parse_metropolis_convention(const std::string& name) {
    if (name == "1+max") return MetropolisConvention::inv_one_plus_max;
    if (name == "max") return MetropolisConvention::inv_max;
    throw InvalidParameter("unknown metropolis convention '" + name + "'");
}

OrbitWeights scheme_weights(const TfsParams& params, Scheme scheme, const SolveOptions& options) {
    params.validate();
    switch (scheme) {
    case Scheme::optimal: return optimal_weights(params, options.scan).weights;
    case Scheme::max_degree: return max_degree_orbit_weights(TfsGraph(params), options.max_degree);
    case Scheme::metropolis: return metropolis_orbit_weights(TfsGraph(params), options.metropolis);
    case Scheme::best_constant: return OrbitWeights(params, best_constant_step(params));
    }
    throw InvalidParameter("unknown scheme");
}

CertificateSummary summarize(const CertificateReport& r) {
    CertificateSummary c;
    c.r1 = r.r1;
    c.r2 = r.r2;
    c.r3 = r.r3;
    c.r4 = r.r4;
    c.r5 = r.r5;
    c.r6 = r.r6;
    c.r7 = r.r7;
    c.duality_gap = r.duality_gap;
    c.recurrence_max = r.recurrences.max();
    c.proportionality = r.proportionality;
    c.ratio_consistency = r.ratio_consistency;
    c.passes = r.passes();
    return c;
}

SolveReport solve(const TfsParams& params, Scheme scheme, const SolveOptions& options) {
    params.validate();
    SolveReport rep;
    rep.params = params;
    rep.scheme = scheme_name(scheme);
    if (scheme == Scheme::max_degree) rep.convention = convention_name(options.max_degree);
    if (scheme == Scheme::metropolis) rep.convention = convention_name(options.metropolis);

    OrbitWeights ow;
    if (scheme == Scheme::optimal) {
        const auto sol = optimal_weights(params, options.scan);
        ow = sol.weights;
        rep.theta_star = sol.theta_star;
        rep.certificate = summarize(verify_certificate(build_dual_certificate(sol), sol));
    } else {
        ow = scheme_weights(params, scheme, options);
    }
    rep.weights = ow.entries();
    const auto sr = block_spectrum(build_blocks(params, ow));
    rep.slem = sr.slem;
    rep.lambda2 = sr.lambda2;
    rep.lambda_min = sr.lambda_min;
    return rep;
}

namespace {

json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round_significant(x);
}

double read_number(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw InvalidParameter(std::string("field '") + key + "' is not a number");
    return v.get<double>();
}

} // namespace

std::string to_json(const SolveReport& r) {
    json j;
    j["params"] = {{"m1", r.params.m1}, {"n1", r.params.n1}, {"m2", r.params.m2}, {"n2", r.params.n2}};
    j["scheme"] = r.scheme;
    j["convention"] = r.convention.empty() ? json(nullptr) : json(r.convention);
    json w = json::array();
    for (const auto& [label, x] : r.weights) w.push_back({{"orbit", label}, {"weight", number(x)}});
    j["weights"] = std::move(w);
    j["slem"] = number(r.slem);
    j["lambda2"] = number(r.lambda2);
    j["lambda_min"] = number(r.lambda_min);
    j["theta_star"] = r.theta_star ? number(*r.theta_star) : json(nullptr);
    if (r.certificate) {
        const auto& c = *r.certificate;
        j["certificate"] = {{"r1", number(c.r1)},
                            {"r2", number(c.r2)},
                            {"r3", number(c.r3)},
                            {"r4", number(c.r4)},
                            {"r5", number(c.r5)},
                            {"r6", number(c.r6)},
                            {"r7", number(c.r7)},
                            {"duality_gap", number(c.duality_gap)},
                            {"recurrence_max", number(c.recurrence_max)},
                            {"proportionality", number(c.proportionality)},
                            {"ratio_consistency", number(c.ratio_consistency)},
                            {"passes", c.passes}};
    } else {
        j["certificate"] = nullptr;
    }
    return j.dump(2);
}

SolveReport solve_report_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        SolveReport r;
        const auto& p = j.at("params");
        r.params = {p.at("m1").get<int>(), p.at("n1").get<int>(), p.at("m2").get<int>(), p.at("n2").get<int>()};
        r.scheme = j.at("scheme").get<std::string>();
        if (!j.at("convention").is_null()) r.convention = j.at("convention").get<std::string>();
        for (const auto& w : j.at("weights")) r.weights.emplace_back(w.at("orbit").get<int>(), read_number(w, "weight"));
        r.slem = read_number(j, "slem");
        r.lambda2 = read_number(j, "lambda2");
        r.lambda_min = read_number(j, "lambda_min");
        if (!j.at("theta_star").is_null()) r.theta_star = read_number(j, "theta_star");
        if (const auto& c = j.at("certificate"); !c.is_null()) {
            CertificateSummary s;
            s.r1 = read_number(c, "r1");
            s.r2 = read_number(c, "r2");
            s.r3 = read_number(c, "r3");
            s.r4 = read_number(c, "r4");
            s.r5 = read_number(c, "r5");
            s.r6 = read_number(c, "r6");
            s.r7 = read_number(c, "r7");
            s.duality_gap = read_number(c, "duality_gap");
            s.recurrence_max = read_number(c, "recurrence_max");
            s.proportionality = read_number(c, "proportionality");
            s.ratio_consistency = read_number(c, "ratio_consistency");
            s.passes = c.at("passes").get<bool>();
            r.certificate = s;
        }
        return r;
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("malformed solve report: ") + e.what());
    }
}

std::vector<SolveReport> compare(const TfsParams& params, const SolveOptions& options) {
    std::vector<SolveReport> rows;
    for (Scheme s : {Scheme::optimal, Scheme::max_degree, Scheme::metropolis, Scheme::best_constant}) {
        rows.push_back(solve(params, s, options));
    }
    return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<SolveReport>& rows) {
    out << "scheme,convention,slem,lambda2,lambda_min\n";
    for (const auto& r : rows) {
        out << r.scheme << ',' << r.convention << ',' << format_number(r.slem) << ','
            << format_number(r.lambda2) << ',' << format_number(r.lambda_min) << '\n';
    }
}

VerifyResult verify(const TfsParams& params, double perturbation, const SolveOptions& options) {
    if (!std::isfinite(perturbation)) throw InvalidParameter("perturbation must be finite");
    VerifyResult res;
    res.solution = optimal_weights(params, options.scan);
    res.perturbation = perturbation;
    const auto cert = build_dual_certificate(res.solution);
    res.report = verify_certificate(cert, perturb_boundary(res.solution, perturbation));
    return res;
}

void write_verify_text(std::ostream& out, const VerifyResult& res) {
    const auto& r = res.report;
    using R = CertificateReport;
    auto line = [&](const std::string& name, double value, const char* rel, double threshold, bool ok) {
        out << name << ' ' << format_number(value) << ' ' << rel << ' ' << format_number(threshold) << ' '
            << (ok ? "ok" : "FAIL") << '\n';
    };
    out << "params " << res.solution.params.to_string() << '\n';
    out << "s " << format_number(res.solution.s) << '\n';
    if (res.perturbation != 0.0) out << "perturbation w_-1 " << format_number(res.perturbation) << '\n';
    const std::pair<const char*, double> small[] = {{"r1", r.r1}, {"r2", r.r2}, {"r3", r.r3},
                                                    {"r4", r.r4}, {"r5", r.r5}, {"r6", r.r6}};
    for (const auto& [name, v] : small) line(name, v, "<=", R::kResidualTol, v <= R::kResidualTol);
    line("r7", r.r7, ">=", R::kFeasibilityFloor, r.r7 >= R::kFeasibilityFloor);
    line("duality_gap", std::abs(r.duality_gap), "<=", R::kResidualTol, std::abs(r.duality_gap) <= R::kResidualTol);
    const char* letters = "abcdefg";
    for (int side = 0; side < 2; ++side) {
        for (int k = 0; k < 7; ++k) {
            const double v = r.recurrences.by_letter[static_cast<std::size_t>(side)][static_cast<std::size_t>(k)];
            line(std::string("recurrence_") + letters[k] + (side ? "'" : ""), v, "<=", R::kRecurrenceTol,
                 v <= R::kRecurrenceTol);
        }
    }
    line("proportionality", r.proportionality, "<=", R::kProportionalityTol,
         r.proportionality <= R::kProportionalityTol);
    line("ratio_consistency", r.ratio_consistency, "<=", R::kProportionalityTol,
         r.ratio_consistency <= R::kProportionalityTol);
    out << (r.passes() ? "certificate ok" : "certificate FAILED") << '\n';
}

// --- sweeps -------------------------------------------------------------

std::vector<int> IntRange::values(const char* name) const {
    if (lo < 1) throw InvalidParameter(std::string(name) + " range must start at 1 or above");
    if (hi < lo) {
        throw InvalidParameter(std::string("empty ") + name + " range " + std::to_string(lo) + ".." +
                               std::to_string(hi));
    }
    std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
    std::iota(v.begin(), v.end(), lo);
    return v;
}

std::string sweep_value_name(SweepValue v) { return v == SweepValue::slem ? "slem" : "w_minus1"; }

SweepValue parse_sweep_value(const std::string& name) {
    if (name == "slem") return SweepValue::slem;
    if (name == "w_minus1") return SweepValue::w_minus1;
    throw InvalidParameter("unknown sweep value '" + name + "'");
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Results go to
// caller-owned slots, so the output order never depends on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

SweepGrid sweep_grid(int n1, int n2, const IntRange& m1, const IntRange& m2, SweepValue value,
                     const SolveOptions& options, unsigned threads) {
    SweepGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.value = value;
    g.m1_values = m1.values("m1");
    g.m2_values = m2.values("m2");
    TfsParams{1, n1, 1, n2}.validate();
    g.cells.assign(g.m1_values.size() * g.m2_values.size(), 0.0);
    const auto cols = g.m2_values.size();
    parallel_for(g.cells.size(), threads, [&](std::size_t k) {
        const TfsParams p{g.m1_values[k / cols], n1, g.m2_values[k % cols], n2};
        const auto sol = optimal_weights(p, options.scan);
        g.cells[k] = value == SweepValue::slem ? sol.s : sol.weights[-1];
    });
    return g;
}

std::vector<Fig2Row> sweep_fig2(int n1, int n2, const IntRange& m_bar, const SolveOptions& options,
                                unsigned threads) {
    TfsParams{1, n1, 1, n2}.validate();
    std::vector<Fig2Row> rows;
    for (int mb : m_bar.values("m_bar")) {
        const long total = static_cast<long>(mb) * (n1 + n2);
        for (long a = 1; a * n1 <= total; ++a) {
            const long rest = total - a * n1;
            if (rest >= n2 && rest % n2 == 0) {
                rows.push_back({mb, static_cast<int>(a), static_cast<int>(rest / n2), false, 0.0});
            }
        }
        rows.push_back({mb, mb, mb, true, 0.0});
    }
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        auto& r = rows[k];
        r.slem = r.star ? solve_symmetric_star(r.m_bar, n1 + n2, options.scan).s
                        : optimal_weights({r.m1, n1, r.m2, n2}, options.scan).s;
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, const SweepGrid& g) {
    out << "m1,m2," << sweep_value_name(g.value) << '\n';
    for (std::size_t i = 0; i < g.m1_values.size(); ++i) {
        for (std::size_t j = 0; j < g.m2_values.size(); ++j) {
            out << g.m1_values[i] << ',' << g.m2_values[j] << ',' << format_number(g.at(i, j)) << '\n';
        }
    }
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
    out << "m_bar,network,m1,m2,slem\n";
    for (const auto& r : rows) {
        out << r.m_bar << ',' << (r.star ? "star" : "tfs") << ',' << r.m1 << ',' << r.m2 << ','
            << format_number(r.slem) << '\n';
    }
}

Fig2Properties check_fig2(const std::vector<Fig2Row>& rows) {
    Fig2Properties p;
    for (const auto& star : rows) {
        if (!star.star) continue;
        ++p.columns;
        for (const auto& r : rows) {
            if (!r.star && r.m_bar == star.m_bar && !(star.slem <= r.slem + 1e-12)) ++p.violations;
        }
    }
    return p;
}

GridProperties check_grid(const SweepGrid& g) {
    GridProperties p;
    const auto rows = g.m1_values.size();
    const auto cols = g.m2_values.size();
    p.increasing_m1 = p.increasing_m2 = p.decreasing_m2 = true;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (i + 1 < rows && !(g.at(i + 1, j) > g.at(i, j))) p.increasing_m1 = false;
            if (j + 1 < cols && !(g.at(i, j + 1) > g.at(i, j))) p.increasing_m2 = false;
            if (j + 1 < cols && !(g.at(i, j + 1) < g.at(i, j))) p.decreasing_m2 = false;
            if (i + 1 < rows && j + 1 < cols) {
                ++p.pointwise_cells;
                if (!(g.at(i, j + 1) - g.at(i, j) > g.at(i + 1, j) - g.at(i, j))) ++p.pointwise_failures;
            }
        }
    }
    if (g.m1_values == g.m2_values && rows >= 2) {
        p.line_dominance = p.swap_dominance = true;
        for (std::size_t k = 0; k < rows; ++k) {
            const double along_m2 = g.at(k, cols - 1) - g.at(k, 0);
            const double along_m1 = g.at(rows - 1, k) - g.at(0, k);
            if (!(along_m2 > along_m1)) p.line_dominance = false;
            for (std::size_t b = k + 1; b < cols; ++b) {
                if (!(g.at(k, b) > g.at(b, k))) p.swap_dominance = false;
            }
        }
    }
    return p;
}

// --- simulation ---------------------------------------------------------

SimulationResult run_simulation(const TfsParams& params, Scheme scheme, int steps, std::uint64_t seed,
                                const SolveOptions& options, int tail) {
    if (steps < 0) throw InvalidParameter("steps must be >= 0");
    const auto ow = scheme_weights(params, scheme, options);
    SimulationResult res;
    res.trajectory = simulate(TfsGraph(params), ow, steps, seed, {.keep_states = false});
    try {
        res.factor = convergence_factor_estimate(res.trajectory, tail);
    } catch (const InsufficientSignal& e) {
        res.factor_note = e.what();
    } catch (const PreconditionViolation& e) {
        res.factor_note = e.what();
    }
    return res;
}

void write_simulation_csv(std::ostream& out, const SimulationResult& res) {
    write_trajectory_csv(out, res.trajectory);
    out << "# convergence_factor_estimate," << (res.factor ? format_number(*res.factor) : "NA") << '\n';
}

} // namespace tfs
