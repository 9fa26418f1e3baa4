// spectral.hpp: stratification of the TFS weight matrix.
//
// In the per-stratum DFT basis the weight matrix splits into n1-1 copies of
// W_{-1} (m1 x m1), one W_0 ((m1+m2+1) square) and n2-1 copies of W_1
// (m2 x m2). Spectra are computed per block and combined with multiplicities,
// never replicated.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "tfs/topology.hpp"
#include "tfs/weighting.hpp"

namespace tfs {

struct StratifiedBlocks {
    TfsParams params;
    Eigen::MatrixXd block_minus;  // W_{-1}
    Eigen::MatrixXd block_center; // W_0
    Eigen::MatrixXd block_plus;   // W_1

    std::size_t multiplicity_minus() const { return static_cast<std::size_t>(params.n1 - 1); }
    std::size_t multiplicity_plus() const { return static_cast<std::size_t>(params.n2 - 1); }

    // W' = diag(W_{-1}, W_1).
    Eigen::MatrixXd block_prime() const;
};

struct SpectralReport {
    // Sorted descending; second member is the multiplicity.
    std::vector<std::pair<double, std::size_t>> eigenvalues;
    double lambda2 = 0.0;
    double lambda_min = 0.0;
    double slem = 0.0;
    double theta2 = 0.0; // arccos(lambda2)

    std::size_t total_count() const;
    // Full multiset, descending. Only for modest sizes.
    std::vector<double> expanded() const;
};

StratifiedBlocks build_blocks(const TfsParams& params, const OrbitWeights& ow);

// Eq. (12)-style unit vector spanning the eigenvalue-one direction of W_0.
Eigen::VectorXd perron_vector(const TfsParams& params);

// Unitary N x N matrix whose columns are the stratified DFT vectors. Column
// order: the n1-1 copies of the W_{-1} block (mu = 1..n1-1, strata -m1..-1),
// then the W_0 block (mu = 0 on negative strata, centre, mu = 0 on positive
// strata), then the n2-1 copies of the W_1 block.
Eigen::MatrixXcd stratification_basis(const TfsParams& params);

struct BasisTransport {
    StratifiedBlocks blocks;
    double max_off_block = 0.0;   // largest |entry| outside the block pattern
    double max_imaginary = 0.0;   // largest |Im| anywhere
    double max_copy_mismatch = 0.0; // largest spread among repeated blocks
};

// Transforms a dense W into the stratified basis and reads the blocks back.
// Throws NumericalFailure when off-block or imaginary residues exceed tol.
BasisTransport transport_to_strata(const WeightMatrix& w, double tol = 1e-12);

SpectralReport block_spectrum(const StratifiedBlocks& blocks);

inline constexpr std::size_t kDefaultFullSpectrumLimit = 5000;

// Dense oracle. Throws PreconditionViolation above max_n nodes.
SpectralReport full_spectrum(const WeightMatrix& w,
                             std::size_t max_n = kDefaultFullSpectrumLimit);

// Builds a report from an unsorted multiset given with multiplicities.
SpectralReport make_report(std::vector<std::pair<double, std::size_t>> values);

// Largest violation of the Cauchy interlacing between W_0 and W'. Requires
// n1 >= 2 and n2 >= 2.
double interlacing_check(const StratifiedBlocks& blocks);

// Symmetric eigenvalues, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);
// Eigenvalues of the symmetric tridiagonal matrix stored in m, ascending.
Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::MatrixXd& m);

} // namespace tfs
