#include "tfs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfs/errors.hpp"

namespace tfs {

namespace {

// Left arm block over strata -m1..-1.
Eigen::MatrixXd left_block(const TfsParams& p, const OrbitWeights& ow) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p.m1, p.m1);
    for (int k = 0; k < p.m1; ++k) {
        const int i = k - p.m1;
        b(k, k) = 1.0 - ow[i] - (i > -p.m1 ? ow[i - 1] : 0.0);
        if (k + 1 < p.m1) {
            b(k, k + 1) = ow[i];
            b(k + 1, k) = ow[i];
        }
    }
    return b;
}

// Right arm block over strata 1..m2.
Eigen::MatrixXd right_block(const TfsParams& p, const OrbitWeights& ow) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p.m2, p.m2);
    for (int k = 0; k < p.m2; ++k) {
        const int i = k + 1;
        b(k, k) = 1.0 - ow[i] - (i < p.m2 ? ow[i + 1] : 0.0);
        if (k + 1 < p.m2) {
            b(k, k + 1) = ow[i + 1];
            b(k + 1, k) = ow[i + 1];
        }
    }
    return b;
}

void append(std::vector<std::pair<double, std::size_t>>& out, const Eigen::VectorXd& values,
            std::size_t multiplicity) {
    if (multiplicity == 0) return;
    for (Eigen::Index k = 0; k < values.size(); ++k) out.emplace_back(values(k), multiplicity);
}

} // namespace

Eigen::MatrixXd StratifiedBlocks::block_prime() const {
    const auto m1 = block_minus.rows();
    const auto m2 = block_plus.rows();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m1 + m2, m1 + m2);
    w.topLeftCorner(m1, m1) = block_minus;
    w.bottomRightCorner(m2, m2) = block_plus;
    return w;
}

std::size_t SpectralReport::total_count() const {
    std::size_t n = 0;
    for (const auto& [value, mult] : eigenvalues) n += mult;
    return n;
}

std::vector<double> SpectralReport::expanded() const {
    std::vector<double> out;
    out.reserve(total_count());
    for (const auto& [value, mult] : eigenvalues) out.insert(out.end(), mult, value);
    return out;
}

StratifiedBlocks build_blocks(const TfsParams& params, const OrbitWeights& ow) {
    params.validate();
    if (!(ow.params() == params)) {
        throw InvalidParameter("orbit weights do not belong to " + params.to_string());
    }
    StratifiedBlocks blocks{params, left_block(params, ow), {}, right_block(params, ow)};

    const int d = params.stratum_count();
    const int c = params.m1;
    auto& w0 = blocks.block_center;
    w0 = Eigen::MatrixXd::Zero(d, d);
    w0.topLeftCorner(params.m1, params.m1) = blocks.block_minus;
    w0.bottomRightCorner(params.m2, params.m2) = blocks.block_plus;
    const double left_coupling = std::sqrt(static_cast<double>(params.n1)) * ow[-1];
    const double right_coupling = std::sqrt(static_cast<double>(params.n2)) * ow[1];
    w0(c, c) = 1.0 - params.n1 * ow[-1] - params.n2 * ow[1];
    w0(c - 1, c) = w0(c, c - 1) = left_coupling;
    w0(c, c + 1) = w0(c + 1, c) = right_coupling;
    return blocks;
}

Eigen::VectorXd perron_vector(const TfsParams& params) {
    params.validate();
    Eigen::VectorXd v(params.stratum_count());
    for (int k = 0; k < params.m1; ++k) v(k) = std::sqrt(static_cast<double>(params.n1));
    v(params.m1) = 1.0;
    for (int k = params.m1 + 1; k < params.stratum_count(); ++k) {
        v(k) = std::sqrt(static_cast<double>(params.n2));
    }
    return v / std::sqrt(static_cast<double>(params.node_count()));
}

Eigen::MatrixXcd stratification_basis(const TfsParams& params) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(params.node_count());
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(n, n);
    const double two_pi = 2.0 * std::numbers::pi;

    // phi_{i,mu} = n^{-1/2} sum_k omega^{mu k} e_{i,k}
    auto fill = [&](Eigen::Index col, int i, int mu, int branches) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(branches));
        for (int k = 1; k <= branches; ++k) {
            const double angle = two_pi * static_cast<double>(mu) * k / branches;
            const auto row = static_cast<Eigen::Index>(node_index(params, {i, k}));
            phi(row, col) = std::polar(scale, angle);
        }
    };

    Eigen::Index col = 0;
    for (int mu = 1; mu < params.n1; ++mu)
        for (int i = -params.m1; i <= -1; ++i) fill(col++, i, mu, params.n1);
    for (int i = -params.m1; i <= -1; ++i) fill(col++, i, 0, params.n1);
    phi(static_cast<Eigen::Index>(node_index(params, {0, 0})), col++) = 1.0;
    for (int i = 1; i <= params.m2; ++i) fill(col++, i, 0, params.n2);
    for (int mu = 1; mu < params.n2; ++mu)
        for (int i = 1; i <= params.m2; ++i) fill(col++, i, mu, params.n2);
    return phi;
}

BasisTransport transport_to_strata(const WeightMatrix& w, double tol) {
    const auto& p = w.params;
    const Eigen::MatrixXcd phi = stratification_basis(p);
    if (w.entries.rows() != phi.rows() || w.entries.cols() != phi.rows()) {
        throw DimensionMismatch("weight matrix shape does not match " + p.to_string());
    }
    const Eigen::MatrixXcd t = phi.adjoint() * w.entries.cast<std::complex<double>>() * phi;

    // Block start/size along the diagonal, in basis column order.
    struct Span {
        Eigen::Index start;
        Eigen::Index size;
    };
    std::vector<Span> minus_copies, plus_copies;
    Eigen::Index at = 0;
    for (int mu = 1; mu < p.n1; ++mu, at += p.m1) minus_copies.push_back({at, p.m1});
    const Span center{at, p.stratum_count()};
    at += p.stratum_count();
    for (int mu = 1; mu < p.n2; ++mu, at += p.m2) plus_copies.push_back({at, p.m2});

    std::vector<Eigen::Index> owner(static_cast<std::size_t>(t.rows()));
    Eigen::Index id = 0;
    auto mark = [&](const Span& s) {
        for (Eigen::Index k = 0; k < s.size; ++k) owner[static_cast<std::size_t>(s.start + k)] = id;
        ++id;
    };
    for (const auto& s : minus_copies) mark(s);
    mark(center);
    for (const auto& s : plus_copies) mark(s);

    BasisTransport out;
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.cols(); ++c) {
            out.max_imaginary = std::max(out.max_imaginary, std::abs(t(r, c).imag()));
            if (owner[static_cast<std::size_t>(r)] != owner[static_cast<std::size_t>(c)]) {
                out.max_off_block = std::max(out.max_off_block, std::abs(t(r, c)));
            }
        }
    }

    auto read = [&](const Span& s) -> Eigen::MatrixXd {
        return t.block(s.start, s.start, s.size, s.size).real();
    };
    auto read_copies = [&](const std::vector<Span>& spans, Eigen::Index size) -> Eigen::MatrixXd {
        if (spans.empty()) return Eigen::MatrixXd::Zero(size, size);
        Eigen::MatrixXd first = read(spans.front());
        for (const auto& s : spans) {
            out.max_copy_mismatch = std::max(out.max_copy_mismatch, (read(s) - first).cwiseAbs().maxCoeff());
        }
        return first;
    };

    out.blocks.params = p;
    out.blocks.block_center = read(center);
    // With a single branch the W_{-1} / W_1 blocks have no standalone copy;
    // they are still the leading / trailing principal parts of W_0.
    out.blocks.block_minus = minus_copies.empty() ? Eigen::MatrixXd(out.blocks.block_center.topLeftCorner(p.m1, p.m1))
                                                  : read_copies(minus_copies, p.m1);
    out.blocks.block_plus = plus_copies.empty() ? Eigen::MatrixXd(out.blocks.block_center.bottomRightCorner(p.m2, p.m2))
                                                : read_copies(plus_copies, p.m2);

    if (out.max_off_block > tol || out.max_imaginary > tol || out.max_copy_mismatch > tol) {
        throw NumericalFailure("stratified transform is not block diagonal: off-block " +
                               std::to_string(out.max_off_block) + ", imaginary " +
                               std::to_string(out.max_imaginary));
    }
    return out;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
    return solver.eigenvalues();
}

Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return m.diagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    const Eigen::VectorXd diag = m.diagonal();
    const Eigen::VectorXd sub = m.diagonal(-1);
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("tridiagonal eigensolver did not converge");
    return solver.eigenvalues();
}

SpectralReport make_report(std::vector<std::pair<double, std::size_t>> values) {
    std::erase_if(values, [](const auto& e) { return e.second == 0; });
    if (values.empty()) throw PreconditionViolation("empty spectrum");
    std::stable_sort(values.begin(), values.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    SpectralReport r;
    r.eigenvalues = std::move(values);
    const auto& top = r.eigenvalues.front();
    if (top.second >= 2) {
        r.lambda2 = top.first;
    } else if (r.eigenvalues.size() >= 2) {
        r.lambda2 = r.eigenvalues[1].first;
    } else {
        r.lambda2 = top.first;
    }
    r.lambda_min = r.eigenvalues.back().first;
    r.slem = std::max(r.lambda2, -r.lambda_min);
    r.theta2 = std::acos(std::clamp(r.lambda2, -1.0, 1.0));
    return r;
}

SpectralReport block_spectrum(const StratifiedBlocks& blocks) {
    std::vector<std::pair<double, std::size_t>> values;
    values.reserve(static_cast<std::size_t>(blocks.block_center.rows() * 2));
    append(values, tridiagonal_eigenvalues(blocks.block_minus), blocks.multiplicity_minus());
    append(values, symmetric_eigenvalues(blocks.block_center), 1);
    append(values, tridiagonal_eigenvalues(blocks.block_plus), blocks.multiplicity_plus());
    return make_report(std::move(values));
}

SpectralReport full_spectrum(const WeightMatrix& w, std::size_t max_n) {
    const auto n = static_cast<std::size_t>(w.entries.rows());
    if (n > max_n) {
        throw PreconditionViolation("dense spectrum limited to " + std::to_string(max_n) +
                                    " nodes, got " + std::to_string(n));
    }
    if (w.entries.cols() != w.entries.rows()) throw DimensionMismatch("weight matrix is not square");
    std::vector<std::pair<double, std::size_t>> values;
    values.reserve(n);
    append(values, symmetric_eigenvalues(w.entries), 1);
    return make_report(std::move(values));
}

double interlacing_check(const StratifiedBlocks& blocks) {
    if (blocks.params.n1 < 2 || blocks.params.n2 < 2) {
        throw PreconditionViolation("interlacing between W_0 and W' needs n1, n2 >= 2");
    }
    const Eigen::VectorXd outer = symmetric_eigenvalues(blocks.block_center);
    std::vector<double> inner;
    for (const auto& m : {blocks.block_minus, blocks.block_plus}) {
        const Eigen::VectorXd ev = tridiagonal_eigenvalues(m);
        inner.insert(inner.end(), ev.begin(), ev.end());
    }
    std::sort(inner.begin(), inner.end());

    double violation = 0.0;
    for (std::size_t j = 0; j < inner.size(); ++j) {
        const auto k = static_cast<Eigen::Index>(j);
        violation = std::max(violation, outer(k) - inner[j]);
        violation = std::max(violation, inner[j] - outer(k + 1));
    }
    return violation;
}

} // namespace tfs
