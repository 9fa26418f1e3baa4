// optimizer.hpp: closed-form optimal weights for TFS networks and the SDP
// dual certificate that proves them optimal.
//
// The optimum has every interior weight equal to 1/2. The two weights next to
// the centre, and the optimal SLEM s = cos(theta*), follow from the smallest
// root theta* in (0, pi) of the characteristic relation
//
//   (2/n1 cot(m1 t) cot(t/2) - 1)(2/n2 cot(m2 t) cot(t/2) - 1) = 1.
//
// Optimality is certified by a rank-one dual variable Z = [z1; z2][z1; z2]^T
// whose coordinates in the alpha / alpha' bases obey sine recurrences.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tfs/spectral.hpp"
#include "tfs/topology.hpp"
#include "tfs/weighting.hpp"

namespace tfs {

inline constexpr double kPoleGuard = 1e-9;

// Residual of the characteristic relation at theta. Throws PoleProximity
// within kPoleGuard of a pole of cot(m1 t), cot(m2 t) or cot(t/2), and
// InvalidParameter outside (0, pi).
double char_residual(const TfsParams& params, double theta);

// Residual of the symmetric-star relation
// (n+2) cos((m+1/2) t) - (n-2) cos((m-1/2) t).
double star_residual(int m, int n, double theta);

struct RootScanOptions {
    std::size_t grid_points = 0; // 0 selects max(10^4, 200 (m1+m2))
    double tol = 1e-12;          // bracket width in theta
};

struct ThetaRoots {
    std::vector<double> roots;     // ascending, inside (0, pi)
    std::vector<double> residuals; // |f| at each root
    std::size_t expected_count = 0; // W_0 eigenvalues below one
    std::vector<std::string> warnings;
};

// Scans (0, pi) for all roots of the characteristic relation. Requires
// n1, n2 >= 2. Throws NumericalFailure if no root is found.
ThetaRoots solve_theta_roots(const TfsParams& params, const RootScanOptions& options = {});

// Boundary weight (1 - s) sin(m t) / (sin(m t) - sin((m-1) t)), s = cos t.
double boundary_weight(int m, double theta);

struct OptimalSolution {
    TfsParams params;
    double theta_star = 0.0;
    double s = 0.0; // cos(theta_star), the optimal SLEM
    OrbitWeights weights;
    double lambda_min = 0.0;       // smallest eigenvalue of the optimal W
    double cos_largest_root = 0.0; // cos of the largest characteristic root
    double self_check_slem = 0.0;  // SLEM of the assembled W from the blocks
    ThetaRoots roots;
};

// Optimal orbit weights. Requires n1, n2 >= 2. Throws NumericalFailure when
// the block spectrum of the assembled W disagrees with s beyond 1e-9.
OptimalSolution optimal_weights(const TfsParams& params, const RootScanOptions& options = {});

// Orbit weights for an arbitrary theta: interior 1/2, boundary per
// boundary_weight. optimal_weights uses theta*.
OrbitWeights weights_for_theta(const TfsParams& params, double theta);

struct StarSolution {
    int m = 0;
    int n = 0;
    double theta_star = 0.0;
    double s = 0.0;
    double centre_weight = 0.0;   // weight of the edges at the centre
    std::vector<double> weights;  // from the centre outwards; 1/2 past the first
};

// Symmetric star with n branches of length m. Requires m >= 1, n >= 2.
StarSolution solve_symmetric_star(int m, int n, const RootScanOptions& options = {});

struct EquivalentStar {
    int n = 0;
    std::int64_t m_bar_num = 0; // reduced
    std::int64_t m_bar_den = 1;

    double m_bar() const { return static_cast<double>(m_bar_num) / static_cast<double>(m_bar_den); }
    bool m_bar_is_integer() const { return m_bar_den == 1; }
};

EquivalentStar equivalent_star(const TfsParams& params);

// alpha_i as columns of a (m1+m2+1) x (m1+m2) matrix and alpha'_i as columns
// of a (m1+m2) x (m1+m2) matrix; column k holds label orbit_labels()[k].
struct AlphaVectors {
    TfsParams params;
    std::vector<int> labels;
    Eigen::MatrixXd alpha;
    Eigen::MatrixXd alpha_prime;

    Eigen::Index column(int label) const;
};

AlphaVectors alpha_vectors(const TfsParams& params);

// The Gram matrices written out entry by entry (not via dot products).
Eigen::MatrixXd gram_closed_form(const TfsParams& params);
Eigen::MatrixXd gram_prime_closed_form(const TfsParams& params);

// Rank-one expansions of W_0 and W' in the alpha bases.
Eigen::MatrixXd center_block_from_alphas(const AlphaVectors& alphas, const OrbitWeights& ow);
Eigen::MatrixXd prime_block_from_alphas(const AlphaVectors& alphas, const OrbitWeights& ow);

struct DualCertificate {
    TfsParams params;
    double theta = 0.0;
    double s = 0.0;
    // Coordinates in label order (orbit_labels()), unhatted.
    std::vector<double> a;
    std::vector<double> a_prime;
    Eigen::VectorXd z1; // m1+m2+1
    Eigen::VectorXd z2; // m1+m2
    // Anchor ratio a_{m2}/a_{-m1} from the centre-row slackness equation, and
    // the product of the two centre-row ratios (1 exactly at a root).
    double anchor_ratio = 0.0;
    double ratio_product = 0.0;

    double coord(int label) const;
    double coord_prime(int label) const;
    // Hatted coordinates; identical to coord/coord_prime except at +-1.
    double hat(int label) const;
    double hat_prime(int label) const;
};

// Throws NumericalFailure if sin(theta*) < 1e-12.
DualCertificate build_dual_certificate(const OptimalSolution& sol);

// One residual per lettered recurrence for the unprimed (index 0) and primed
// (index 1) coordinates: a..g. Entries for equations that do not occur at the
// given branch lengths are zero.
struct RecurrenceResiduals {
    std::array<std::array<double, 7>, 2> by_letter{};
    double max() const;
};

struct CertificateReport {
    double r1 = 0.0; // ||(sI + W_0 - vv^T) z1||
    double r2 = 0.0; // ||(sI - W') z2||
    double r3 = 0.0; // |v^T z1|
    double r4 = 0.0; // | ||z1||^2 + ||z2||^2 - 1 |
    double r5 = 0.0; // | ||z2||^2 - ||z1||^2 - s |
    double r6 = 0.0; // max trace-constraint mismatch
    double r7 = 0.0; // min eigenvalue of the two primal LMI blocks
    double duality_gap = 0.0;
    double proportionality = 0.0; // max relative (s+1)^2 a^2 vs (1-s)^2 a'^2
    double ratio_consistency = 0.0; // |ratio_product - 1|
    RecurrenceResiduals recurrences;

    static constexpr double kResidualTol = 1e-8;
    static constexpr double kFeasibilityFloor = -1e-10;
    static constexpr double kRecurrenceTol = 1e-10;
    static constexpr double kProportionalityTol = 1e-9;

    bool passes() const;
    // Names of checks that fail their thresholds.
    std::vector<std::string> failures() const;
};

// Evaluates the certificate against the weights and s carried by sol.
CertificateReport verify_certificate(const DualCertificate& cert, const OptimalSolution& sol);

// Copy of sol with w_{-1} shifted by delta (s and theta unchanged).
OptimalSolution perturb_boundary(const OptimalSolution& sol, double delta);

// Smallest SLEM(perturbed) - s over random shifts of (w_{-1}, w_1) of size up
// to radius, interior weights fixed.
double optimality_probe(const OptimalSolution& sol, int samples, double radius, std::uint64_t seed);

} // namespace tfs
