#include "tfs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

#include "tfs/errors.hpp"

namespace tfs {

namespace {

constexpr double kPi = std::numbers::pi;

void require_two_branches(const TfsParams& p) {
    p.validate();
    if (p.n1 < 2 || p.n2 < 2) {
        throw PreconditionViolation("the closed-form optimum requires n1 >= 2 and n2 >= 2, got " +
                                    p.to_string());
    }
}

double residual_unchecked(const TfsParams& p, double t) {
    const double c = 1.0 / std::tan(0.5 * t);
    const double left = 2.0 / p.n1 / std::tan(p.m1 * t) * c - 1.0;
    const double right = 2.0 / p.n2 / std::tan(p.m2 * t) * c - 1.0;
    return left * right - 1.0;
}

double distance_to_pole(int m, double t) {
    const double x = t * m / kPi;
    return std::abs(x - std::round(x)) * kPi / m;
}

// Bisect [a, b] (f(a), f(b) of opposite sign) to width tol, then one secant
// step inside the final bracket.
double refine_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                   double tol) {
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    const double secant = a - fa * (b - a) / (fb - fa);
    if (std::isfinite(secant) && secant >= a && secant <= b) {
        const double fs = f(secant);
        if (std::abs(fs) <= std::min(std::abs(fa), std::abs(fb))) return secant;
    }
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

// Sign-change roots of f on the open interval (lo, hi), sampled on the global
// grid pi*g/(points+1) plus the interval ends. f must be continuous there.
void scan_segment(const std::function<double(double)>& f, double lo, double hi, std::size_t points,
                  double tol, std::vector<double>& roots) {
    if (!(hi > lo)) return;
    std::vector<double> xs;
    xs.push_back(lo);
    const double step = kPi / static_cast<double>(points + 1);
    const auto first = static_cast<std::size_t>(std::floor(lo / step)) + 1;
    for (std::size_t g = first; g <= points; ++g) {
        const double x = step * static_cast<double>(g);
        if (x >= hi) break;
        if (x > lo) xs.push_back(x);
    }
    xs.push_back(hi);

    double prev_x = xs.front();
    double prev_f = f(prev_x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double x = xs[k];
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (prev_f != 0.0 && (fx > 0.0) != (prev_f > 0.0)) {
            roots.push_back(refine_root(f, prev_x, x, prev_f, fx, tol));
        }
        prev_x = x;
        prev_f = fx;
    }
}

std::size_t default_grid(const TfsParams& p) {
    return std::max<std::size_t>(10000, 200 * static_cast<std::size_t>(p.m1 + p.m2));
}

// sin(k x) / sin(x)
double sine_ratio(int k, double x) { return std::sin(k * x) / std::sin(x); }

} // namespace

double char_residual(const TfsParams& params, double theta) {
    params.validate();
    if (!(theta > 0.0 && theta < kPi)) {
        throw InvalidParameter("theta must lie in (0, pi)");
    }
    if (theta < kPoleGuard || distance_to_pole(params.m1, theta) < kPoleGuard ||
        distance_to_pole(params.m2, theta) < kPoleGuard) {
        throw PoleProximity("theta = " + std::to_string(theta) + " is within " +
                            std::to_string(kPoleGuard) + " of a pole");
    }
    return residual_unchecked(params, theta);
}

double star_residual(int m, int n, double theta) {
    return (n + 2.0) * std::cos((m + 0.5) * theta) - (n - 2.0) * std::cos((m - 0.5) * theta);
}

ThetaRoots solve_theta_roots(const TfsParams& params, const RootScanOptions& options) {
    require_two_branches(params);
    const std::size_t points = options.grid_points == 0 ? default_grid(params) : options.grid_points;
    if (points < 1000) throw PreconditionViolation("root scan needs at least 1000 grid points");
    if (!(options.tol > 0.0)) throw PreconditionViolation("root tolerance must be positive");

    // Poles of cot(m1 t) and cot(m2 t) split (0, pi) into segments on which
    // the residual is continuous.
    std::vector<double> poles{0.0, kPi};
    for (int m : {params.m1, params.m2}) {
        for (int k = 1; k < m; ++k) poles.push_back(k * kPi / m);
    }
    std::sort(poles.begin(), poles.end());
    poles.erase(std::unique(poles.begin(), poles.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                poles.end());

    const auto f = [&](double t) { return residual_unchecked(params, t); };
    ThetaRoots out;
    for (std::size_t k = 0; k + 1 < poles.size(); ++k) {
        scan_segment(f, poles[k] + kPoleGuard, poles[k + 1] - kPoleGuard, points, options.tol, out.roots);
    }
    if (out.roots.empty()) {
        throw NumericalFailure("no characteristic root found for " + params.to_string());
    }
    std::sort(out.roots.begin(), out.roots.end());
    for (double r : out.roots) out.residuals.push_back(std::abs(f(r)));

    const auto blocks = build_blocks(params, weights_for_theta(params, out.roots.front()));
    const Eigen::VectorXd ev = symmetric_eigenvalues(blocks.block_center);
    out.expected_count = static_cast<std::size_t>((ev.array() < 1.0 - 1e-9).count());
    if (out.roots.size() != out.expected_count) {
        out.warnings.push_back("found " + std::to_string(out.roots.size()) +
                               " characteristic roots, W_0 has " + std::to_string(out.expected_count) +
                               " eigenvalues below one");
    }
    return out;
}

double boundary_weight(int m, double theta) {
    const double s = std::cos(theta);
    const double top = std::sin(m * theta);
    const double denom = top - std::sin((m - 1) * theta);
    if (std::abs(denom) < 1e-300) throw NumericalFailure("boundary weight denominator vanishes");
    return (1.0 - s) * top / denom;
}

OrbitWeights weights_for_theta(const TfsParams& params, double theta) {
    OrbitWeights ow(params, 0.5);
    ow.at(-1) = boundary_weight(params.m1, theta);
    ow.at(1) = boundary_weight(params.m2, theta);
    return ow;
}

OptimalSolution optimal_weights(const TfsParams& params, const RootScanOptions& options) {
    OptimalSolution sol;
    sol.params = params;
    sol.roots = solve_theta_roots(params, options);
    sol.theta_star = sol.roots.roots.front();
    sol.s = std::cos(sol.theta_star);
    sol.cos_largest_root = std::cos(sol.roots.roots.back());
    sol.weights = weights_for_theta(params, sol.theta_star);

    const auto report = block_spectrum(build_blocks(params, sol.weights));
    sol.self_check_slem = report.slem;
    sol.lambda_min = report.lambda_min;
    if (std::abs(report.slem - sol.s) > 1e-9) {
        throw NumericalFailure("self-check failed for " + params.to_string() + ": cos(theta*) = " +
                               std::to_string(sol.s) + " but SLEM = " + std::to_string(report.slem));
    }
    return sol;
}

StarSolution solve_symmetric_star(int m, int n, const RootScanOptions& options) {
    if (m < 1 || n < 2) throw PreconditionViolation("symmetric star needs m >= 1 and n >= 2");
    const std::size_t points =
        options.grid_points == 0 ? std::max<std::size_t>(10000, 400 * static_cast<std::size_t>(m))
                                 : options.grid_points;
    if (points < 1000) throw PreconditionViolation("root scan needs at least 1000 grid points");
    std::vector<double> roots;
    const auto g = [&](double t) { return star_residual(m, n, t); };
    scan_segment(g, kPoleGuard, kPi - kPoleGuard, points, options.tol, roots);
    if (roots.empty()) throw NumericalFailure("no symmetric-star root found");

    StarSolution sol;
    sol.m = m;
    sol.n = n;
    sol.theta_star = *std::min_element(roots.begin(), roots.end());
    sol.s = std::cos(sol.theta_star);
    sol.centre_weight = boundary_weight(m, sol.theta_star);
    sol.weights.assign(static_cast<std::size_t>(m), 0.5);
    sol.weights.front() = sol.centre_weight;
    return sol;
}

EquivalentStar equivalent_star(const TfsParams& params) {
    params.validate();
    EquivalentStar eq;
    eq.n = params.n1 + params.n2;
    const std::int64_t num = static_cast<std::int64_t>(params.m1) * params.n1 +
                             static_cast<std::int64_t>(params.m2) * params.n2;
    const std::int64_t den = eq.n;
    const std::int64_t g = std::gcd(num, den);
    eq.m_bar_num = num / g;
    eq.m_bar_den = den / g;
    return eq;
}

Eigen::Index AlphaVectors::column(int label) const {
    if (label < -params.m1 || label > params.m2 || label == 0) {
        throw InvalidParameter("no alpha vector for label " + std::to_string(label));
    }
    return label < 0 ? label + params.m1 : label + params.m1 - 1;
}

AlphaVectors alpha_vectors(const TfsParams& params) {
    params.validate();
    const int m1 = params.m1;
    const int m2 = params.m2;
    const int d = params.stratum_count();
    const int l = params.orbit_count();
    AlphaVectors av{params, orbit_labels(params), Eigen::MatrixXd::Zero(d, l), Eigen::MatrixXd::Zero(l, l)};
    const double h = 1.0 / std::sqrt(2.0);
    // Positions j below are 1-based as in the stratum ordering -m1..m2.
    auto set = [](Eigen::MatrixXd& m, int j, Eigen::Index col, double x) { m(j - 1, col) = x; };

    for (int i = -m1; i <= -2; ++i) {
        const auto c = av.column(i);
        set(av.alpha, i + m1 + 1, c, -h);
        set(av.alpha, i + m1 + 2, c, h);
        set(av.alpha_prime, i + m1 + 1, c, -h);
        set(av.alpha_prime, i + m1 + 2, c, h);
    }
    {
        const auto c = av.column(-1);
        const double scale = 1.0 / std::sqrt(params.n1 + 1.0);
        set(av.alpha, m1, c, -scale);
        set(av.alpha, m1 + 1, c, std::sqrt(static_cast<double>(params.n1)) * scale);
        set(av.alpha_prime, m1, c, 1.0);
    }
    {
        const auto c = av.column(1);
        const double scale = 1.0 / std::sqrt(params.n2 + 1.0);
        set(av.alpha, m1 + 1, c, -std::sqrt(static_cast<double>(params.n2)) * scale);
        set(av.alpha, m1 + 2, c, scale);
        set(av.alpha_prime, m1 + 1, c, 1.0);
    }
    for (int i = 2; i <= m2; ++i) {
        const auto c = av.column(i);
        set(av.alpha, i + m1, c, -h);
        set(av.alpha, i + m1 + 1, c, h);
        set(av.alpha_prime, m1 + i - 1, c, -h);
        set(av.alpha_prime, m1 + i, c, h);
    }
    return av;
}

namespace {

template <class Entry>
Eigen::MatrixXd gram_from_rule(const TfsParams& p, Entry entry) {
    const auto labels = orbit_labels(p);
    const auto l = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd g(l, l);
    for (Eigen::Index r = 0; r < l; ++r)
        for (Eigen::Index c = 0; c < l; ++c) g(r, c) = entry(labels[static_cast<std::size_t>(r)],
                                                              labels[static_cast<std::size_t>(c)]);
    return g;
}

// -1/2 between consecutive labels of one arm, away from the centre pair.
bool plain_neighbours(int i, int j) {
    if (std::abs(i - j) != 1) return false;
    const int lo = std::min(i, j);
    return lo != -2 && lo != -1 && lo != 1;
}

} // namespace

Eigen::MatrixXd gram_closed_form(const TfsParams& p) {
    const double n1 = p.n1;
    const double n2 = p.n2;
    return gram_from_rule(p, [&](int i, int j) {
        if (i == j) return 1.0;
        if (plain_neighbours(i, j)) return -0.5;
        if ((i == -2 && j == -1) || (i == -1 && j == -2)) return -1.0 / std::sqrt(2.0 * (n1 + 1.0));
        if ((i == 1 && j == 2) || (i == 2 && j == 1)) return -1.0 / std::sqrt(2.0 * (n2 + 1.0));
        if ((i == -1 && j == 1) || (i == 1 && j == -1)) {
            return -std::sqrt(n1 * n2) / std::sqrt((1.0 + n1) * (1.0 + n2));
        }
        return 0.0;
    });
}

Eigen::MatrixXd gram_prime_closed_form(const TfsParams& p) {
    return gram_from_rule(p, [](int i, int j) {
        if (i == j) return 1.0;
        if (plain_neighbours(i, j)) return -0.5;
        if ((i == -2 && j == -1) || (i == -1 && j == -2)) return 1.0 / std::sqrt(2.0);
        if ((i == 1 && j == 2) || (i == 2 && j == 1)) return -1.0 / std::sqrt(2.0);
        return 0.0;
    });
}

Eigen::MatrixXd center_block_from_alphas(const AlphaVectors& av, const OrbitWeights& ow) {
    const auto d = av.alpha.rows();
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(d, d);
    for (int label : av.labels) {
        const Eigen::VectorXd a = av.alpha.col(av.column(label));
        double coeff = 2.0 * ow[label];
        if (label == -1) coeff = (av.params.n1 + 1.0) * ow[label];
        if (label == 1) coeff = (av.params.n2 + 1.0) * ow[label];
        w -= coeff * a * a.transpose();
    }
    return w;
}

Eigen::MatrixXd prime_block_from_alphas(const AlphaVectors& av, const OrbitWeights& ow) {
    const auto d = av.alpha_prime.rows();
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(d, d);
    for (int label : av.labels) {
        const Eigen::VectorXd a = av.alpha_prime.col(av.column(label));
        const double coeff = (label == -1 || label == 1) ? ow[label] : 2.0 * ow[label];
        w -= coeff * a * a.transpose();
    }
    return w;
}

// --- dual certificate -------------------------------------------------------

namespace {

std::size_t label_slot(const TfsParams& p, int label) {
    return static_cast<std::size_t>(label < 0 ? label + p.m1 : label + p.m1 - 1);
}

double hat_factor(const TfsParams& p, int label) {
    if (label == -1) return std::sqrt(2.0) / std::sqrt(p.n1 + 1.0);
    if (label == 1) return std::sqrt(2.0) / std::sqrt(p.n2 + 1.0);
    return 1.0;
}

double hat_prime_factor(int label) {
    if (label == -1) return -std::sqrt(2.0);
    if (label == 1) return std::sqrt(2.0);
    return 1.0;
}

// Centre-row ratio a_{m2}/a_{-m1} from the slackness equation at label -1,
// with weights from the boundary formula. phi = pi - theta.
double centre_ratio(int m_near, int n_near, int m_far, int n_far, double w_near, double s, double phi) {
    const double lhs = (s + 1.0 - (n_near + 1.0) * w_near) * std::sin(m_near * phi) +
                       w_near * std::sin((m_near - 1) * phi);
    return -lhs / (std::sqrt(static_cast<double>(n_near) * n_far) * w_near * std::sin(m_far * phi));
}

} // namespace

double DualCertificate::coord(int label) const { return a.at(label_slot(params, label)); }
double DualCertificate::coord_prime(int label) const { return a_prime.at(label_slot(params, label)); }
double DualCertificate::hat(int label) const { return hat_factor(params, label) * coord(label); }
double DualCertificate::hat_prime(int label) const { return hat_prime_factor(label) * coord_prime(label); }

DualCertificate build_dual_certificate(const OptimalSolution& sol) {
    const auto& p = sol.params;
    require_two_branches(p);
    const double theta = sol.theta_star;
    const double s = sol.s;
    if (std::sin(theta) < 1e-12) throw NumericalFailure("degenerate certificate: sin(theta*) ~ 0");
    const double phi = kPi - theta;

    DualCertificate cert;
    cert.params = p;
    cert.theta = theta;
    cert.s = s;
    const double w_left = sol.weights[-1];
    const double w_right = sol.weights[1];
    cert.anchor_ratio = centre_ratio(p.m1, p.n1, p.m2, p.n2, w_left, s, phi);
    cert.ratio_product = cert.anchor_ratio * centre_ratio(p.m2, p.n2, p.m1, p.n1, w_right, s, phi);

    // Hatted coordinates along each arm, counted from the leaf: the k-th edge
    // from the leaf carries sin(k phi)/sin(phi) (unprimed) or
    // sin(k theta)/sin(theta) (primed) times the arm's anchor.
    const double kappa = (1.0 + s) / (1.0 - s);
    const std::size_t l = static_cast<std::size_t>(p.orbit_count());
    std::vector<double> hat(l), hat_p(l);
    for (int k = 1; k <= p.m1; ++k) {
        const int label = k - p.m1 - 1;
        hat[label_slot(p, label)] = sine_ratio(k, phi);
        hat_p[label_slot(p, label)] = kappa * sine_ratio(k, theta);
    }
    for (int k = 1; k <= p.m2; ++k) {
        const int label = p.m2 - k + 1;
        hat[label_slot(p, label)] = cert.anchor_ratio * sine_ratio(k, phi);
        hat_p[label_slot(p, label)] = kappa * cert.anchor_ratio * sine_ratio(k, theta);
    }

    cert.a.resize(l);
    cert.a_prime.resize(l);
    for (int label : orbit_labels(p)) {
        const auto slot = label_slot(p, label);
        cert.a[slot] = hat[slot] / hat_factor(p, label);
        cert.a_prime[slot] = hat_p[slot] / hat_prime_factor(label);
    }

    const auto av = alpha_vectors(p);
    const Eigen::Map<const Eigen::VectorXd> a_vec(cert.a.data(), static_cast<Eigen::Index>(l));
    const Eigen::Map<const Eigen::VectorXd> ap_vec(cert.a_prime.data(), static_cast<Eigen::Index>(l));
    cert.z1 = av.alpha * a_vec;
    cert.z2 = av.alpha_prime * ap_vec;

    // One common scale: keeps the a/a' proportionality, and Tr Z = 1.
    const double norm = std::sqrt(cert.z1.squaredNorm() + cert.z2.squaredNorm());
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalFailure("certificate vectors vanish");
    cert.z1 /= norm;
    cert.z2 /= norm;
    for (auto& x : cert.a) x /= norm;
    for (auto& x : cert.a_prime) x /= norm;
    return cert;
}

double RecurrenceResiduals::max() const {
    double m = 0.0;
    for (const auto& side : by_letter)
        for (double x : side) m = std::max(m, x);
    return m;
}

namespace {

enum Letter { kA, kB, kC, kD, kE, kF, kG };

// Residuals of the lettered slackness recurrences. sign = +1 for the
// unprimed system (s + 1 - ...), -1 for the primed one (-s + 1 - ...).
std::array<double, 7> recurrences(const TfsParams& p, const OrbitWeights& w, double s, bool primed,
                                  const std::function<double(int)>& hat) {
    std::array<double, 7> res{};
    const double shift = primed ? 1.0 - s : 1.0 + s;
    auto put = [&](Letter l, double r) { res[l] = std::max(res[l], std::abs(r)); };
    const double cross = std::sqrt(static_cast<double>(p.n1) * p.n2);

    // Left arm, k-th edge from the leaf has label k - m1 - 1.
    auto left = [&](int k) { return (k < 1) ? 0.0 : hat(k - p.m1 - 1); };
    for (int k = 1; k < p.m1; ++k) {
        const int label = k - p.m1 - 1;
        const double x = w[label];
        const double r = (shift - 2.0 * x) * left(k) + x * (left(k - 1) + left(k + 1));
        put(label == -2 ? kC : (k == 1 ? kA : kB), r);
    }
    // Right arm, k-th edge from the leaf has label m2 - k + 1.
    auto right = [&](int k) { return (k < 1) ? 0.0 : hat(p.m2 - k + 1); };
    for (int k = 1; k < p.m2; ++k) {
        const int label = p.m2 - k + 1;
        const double x = w[label];
        const double r = (shift - 2.0 * x) * right(k) + x * (right(k - 1) + right(k + 1));
        put(label == 2 ? kF : (k == 1 ? kG : kB), r);
    }
    const double wl = w[-1];
    const double wr = w[1];
    if (primed) {
        put(kD, (shift - wl) * left(p.m1) + wl * left(p.m1 - 1));
        put(kE, (shift - wr) * right(p.m2) + wr * right(p.m2 - 1));
    } else {
        put(kD, (shift - (p.n1 + 1.0) * wl) * left(p.m1) + wl * left(p.m1 - 1) + cross * wl * right(p.m2));
        put(kE, (shift - (p.n2 + 1.0) * wr) * right(p.m2) + cross * wr * left(p.m1) + wr * right(p.m2 - 1));
    }
    return res;
}

double min_eigenvalue(const Eigen::MatrixXd& m) { return symmetric_eigenvalues(m)(0); }

} // namespace

bool CertificateReport::passes() const { return failures().empty(); }

std::vector<std::string> CertificateReport::failures() const {
    std::vector<std::string> bad;
    const std::array<std::pair<const char*, double>, 7> small{{{"r1", r1},
                                                               {"r2", r2},
                                                               {"r3", r3},
                                                               {"r4", r4},
                                                               {"r5", r5},
                                                               {"r6", r6},
                                                               {"duality_gap", std::abs(duality_gap)}}};
    for (const auto& [name, value] : small) {
        if (!(value <= kResidualTol)) bad.emplace_back(name);
    }
    if (!(r7 >= kFeasibilityFloor)) bad.emplace_back("r7");
    if (!(recurrences.max() <= kRecurrenceTol)) bad.emplace_back("recurrences");
    if (!(proportionality <= kProportionalityTol)) bad.emplace_back("proportionality");
    if (!(ratio_consistency <= kProportionalityTol)) bad.emplace_back("ratio_consistency");
    return bad;
}

CertificateReport verify_certificate(const DualCertificate& cert, const OptimalSolution& sol) {
    const auto& p = sol.params;
    if (!(cert.params == p)) throw InvalidParameter("certificate was built for different parameters");
    const double s = sol.s;
    const auto blocks = build_blocks(p, sol.weights);
    const Eigen::VectorXd v = perron_vector(p);
    const auto d = blocks.block_center.rows();
    const Eigen::MatrixXd w_prime = blocks.block_prime();
    const auto dp = w_prime.rows();

    const Eigen::MatrixXd lower =
        s * Eigen::MatrixXd::Identity(d, d) + blocks.block_center - v * v.transpose();
    const Eigen::MatrixXd upper = s * Eigen::MatrixXd::Identity(dp, dp) - w_prime;

    CertificateReport r;
    r.r1 = (lower * cert.z1).norm();
    r.r2 = (upper * cert.z2).norm();
    r.r3 = std::abs(v.dot(cert.z1));
    const double n1sq = cert.z1.squaredNorm();
    const double n2sq = cert.z2.squaredNorm();
    r.r4 = std::abs(n1sq + n2sq - 1.0);
    r.r5 = std::abs(n2sq - n1sq - s);

    const auto av = alpha_vectors(p);
    for (int label : av.labels) {
        const auto c = av.column(label);
        double factor = 1.0;
        if (label == -1) factor = p.n1 + 1.0;
        if (label == 1) factor = p.n2 + 1.0;
        const double lhs = factor * std::pow(av.alpha.col(c).dot(cert.z1), 2);
        const double rhs = std::pow(av.alpha_prime.col(c).dot(cert.z2), 2);
        r.r6 = std::max(r.r6, std::abs(lhs - rhs));
    }
    r.r7 = std::min(min_eigenvalue(upper), min_eigenvalue(lower));

    // c^T x + Tr[F_0 Z] with F_0 = diag(I - vv^T, -I).
    r.duality_gap = s + cert.z1.dot(cert.z1 - v * v.dot(cert.z1)) - n2sq;

    double largest = 0.0;
    std::vector<std::pair<double, double>> terms;
    for (int label : av.labels) {
        const double lhs = std::pow((s + 1.0) * cert.hat(label), 2);
        const double rhs = std::pow((1.0 - s) * cert.hat_prime(label), 2);
        terms.emplace_back(lhs, rhs);
        largest = std::max({largest, lhs, rhs});
    }
    for (const auto& [lhs, rhs] : terms) {
        const double scale = std::max({lhs, rhs, 1e-12 * largest});
        if (scale > 0.0) r.proportionality = std::max(r.proportionality, std::abs(lhs - rhs) / scale);
    }
    r.ratio_consistency = std::abs(cert.ratio_product - 1.0);

    r.recurrences.by_letter[0] = recurrences(p, sol.weights, s, false, [&](int l) { return cert.hat(l); });
    r.recurrences.by_letter[1] = recurrences(p, sol.weights, s, true, [&](int l) { return cert.hat_prime(l); });
    return r;
}

OptimalSolution perturb_boundary(const OptimalSolution& sol, double delta) {
    OptimalSolution out = sol;
    out.weights.at(-1) += delta;
    return out;
}

double optimality_probe(const OptimalSolution& sol, int samples, double radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-radius, radius);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        OrbitWeights w = sol.weights;
        w.at(-1) += shift(rng);
        w.at(1) += shift(rng);
        const double slem = block_spectrum(build_blocks(sol.params, w)).slem;
        worst = std::min(worst, slem - sol.s);
    }
    return worst;
}

} // namespace tfs
