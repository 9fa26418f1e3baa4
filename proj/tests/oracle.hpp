// Independent reference computations for the tests. Nothing here calls the
// library's eigensolvers or matrix assembly.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "tfs/topology.hpp"

namespace oracle {

// Dense row-major square matrix.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit Matrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
// Eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix m) {
    const std::size_t n = m.n;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                total += m(i, j) * m(i, j);
                if (i != j) off += m(i, j) * m(i, j);
            }
        if (off <= 1e-30 * std::max(total, 1e-300)) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Canonical position of (i, mu), written out from the ordering rule.
inline std::size_t position(const tfs::TfsParams& p, int i, int mu) {
    if (i < 0) return static_cast<std::size_t>((i + p.m1) * p.n1 + (mu - 1));
    if (i == 0) return static_cast<std::size_t>(p.m1 * p.n1);
    return static_cast<std::size_t>(p.m1 * p.n1 + 1 + (i - 1) * p.n2 + (mu - 1));
}

// Weight matrix from the per-stratum case formula, given weights by label.
inline Matrix weight_matrix(const tfs::TfsParams& p, const std::map<int, double>& w) {
    const std::size_t n = static_cast<std::size_t>(p.m1 * p.n1 + p.m2 * p.n2 + 1);
    Matrix m(n);
    const std::size_t c = position(p, 0, 0);
    for (int mu = 1; mu <= p.n1; ++mu) {
        for (int i = -p.m1; i <= -1; ++i) {
            const std::size_t a = position(p, i, mu);
            double d = 1.0 - w.at(i);
            if (i > -p.m1) d -= w.at(i - 1);
            m(a, a) = d;
            const std::size_t b = (i == -1) ? c : position(p, i + 1, mu);
            m(a, b) = m(b, a) = w.at(i);
        }
    }
    for (int eta = 1; eta <= p.n2; ++eta) {
        for (int i = 1; i <= p.m2; ++i) {
            const std::size_t a = position(p, i, eta);
            double d = 1.0 - w.at(i);
            if (i < p.m2) d -= w.at(i + 1);
            m(a, a) = d;
            const std::size_t b = (i == 1) ? c : position(p, i - 1, eta);
            m(a, b) = m(b, a) = w.at(i);
        }
    }
    m(c, c) = 1.0 - p.n1 * w.at(-1) - p.n2 * w.at(1);
    return m;
}

inline std::map<int, double> constant_weights(const tfs::TfsParams& p, double x) {
    std::map<int, double> w;
    for (int i = -p.m1; i <= p.m2; ++i)
        if (i != 0) w[i] = x;
    return w;
}

inline std::map<int, double> random_weights(const tfs::TfsParams& p, std::mt19937_64& rng, double lo = 0.0,
                                            double hi = 0.5) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::map<int, double> w;
    for (int i = -p.m1; i <= p.m2; ++i)
        if (i != 0) w[i] = d(rng);
    return w;
}

// SLEM of a multiset of eigenvalues that contains the eigenvalue 1.
inline double slem(std::vector<double> ev) {
    std::sort(ev.begin(), ev.end());
    // Drop one copy of the top eigenvalue (the averaging direction).
    ev.pop_back();
    return std::max(ev.back(), -ev.front());
}

} // namespace oracle
