#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "tfs/errors.hpp"
#include "tfs/optimizer.hpp"
#include "tfs/spectral.hpp"
#include "tfs/weighting.hpp"

using namespace tfs;

namespace {

oracle::Matrix to_oracle(const WeightMatrix& w) {
    oracle::Matrix m(static_cast<std::size_t>(w.entries.rows()));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j)
            m(i, j) = w.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return m;
}

double oracle_slem(const WeightMatrix& w) { return oracle::slem(oracle::jacobi_eigenvalues(to_oracle(w))); }

std::map<int, double> as_map(const OrbitWeights& ow) {
    std::map<int, double> m;
    for (const auto& [label, x] : ow.entries()) m[label] = x;
    return m;
}

} // namespace

TEST_CASE("centre diagonal of the two-leaf-per-side star") {
    const TfsParams p{1, 2, 1, 2};
    const auto w = assemble_weight_matrix(p, OrbitWeights(p, 0.25));
    CHECK(w.entries(2, 2) == doctest::Approx(0.0));
    CHECK(w.entries(0, 0) == doctest::Approx(0.75));
    CHECK(w.entries(0, 2) == doctest::Approx(0.25));
}

TEST_CASE("zero weights give the identity") {
    for (TfsParams p : {TfsParams{1, 1, 1, 1}, TfsParams{3, 2, 4, 5}}) {
        const auto w = assemble_weight_matrix(p, OrbitWeights(p, 0.0));
        CHECK(w.entries.isIdentity(0.0));
    }
}

TEST_CASE("assembly matches the case formula and round-trips the orbit weights") {
    std::mt19937_64 rng(11);
    for (TfsParams p : {TfsParams{1, 1, 1, 1}, TfsParams{3, 2, 2, 3}, TfsParams{4, 3, 1, 5}, TfsParams{2, 6, 5, 2}}) {
        CAPTURE(p.to_string());
        const auto wmap = oracle::random_weights(p, rng, -0.3, 0.7);
        const auto ow = orbit_weights_from_map(p, wmap);
        const auto w = assemble_weight_matrix(p, ow);
        const auto ref = oracle::weight_matrix(p, wmap);
        double worst = 0.0;
        for (std::size_t i = 0; i < ref.n; ++i)
            for (std::size_t j = 0; j < ref.n; ++j)
                worst = std::max(worst, std::abs(ref(i, j) - w.entries(static_cast<Eigen::Index>(i),
                                                                        static_cast<Eigen::Index>(j))));
        CHECK(worst <= 1e-15);

        const TfsGraph g(p);
        for (std::size_t e = 0; e < g.edges().size(); ++e) {
            const auto a = static_cast<Eigen::Index>(node_index(p, g.edges()[e].a));
            const auto b = static_cast<Eigen::Index>(node_index(p, g.edges()[e].b));
            CHECK(w.entries(a, b) == wmap.at(g.edge_orbits()[e]));
        }
        CHECK(validate_stochastic(w).ok(1e-12));
    }
}

TEST_CASE("missing or foreign orbit weights") {
    const TfsParams p{2, 2, 2, 2};
    std::map<int, double> w{{-2, 0.1}, {-1, 0.1}, {1, 0.1}};
    CHECK_THROWS_AS(orbit_weights_from_map(p, w), MissingOrbitWeight);
    w[2] = 0.1;
    w[3] = 0.1;
    CHECK_THROWS_AS(orbit_weights_from_map(p, w), MissingOrbitWeight);
    CHECK_THROWS_AS(assemble_weight_matrix(p, OrbitWeights({2, 2, 2, 3}, 0.1)), MissingOrbitWeight);
    CHECK_THROWS_AS(assemble_weight_matrix(p, OrbitWeights()), MissingOrbitWeight);
    OrbitWeights ow(p, 0.1);
    CHECK_THROWS_AS(ow.at(0), MissingOrbitWeight);
    CHECK_THROWS_AS(ow.at(3), MissingOrbitWeight);
    ow.at(1) = std::nan("");
    CHECK_FALSE(ow.all_finite());
    CHECK_THROWS_AS(assemble_weight_matrix(p, ow), InvalidParameter);
}

TEST_CASE("optimal weights through the dense matrix") {
    const TfsParams p{3, 4, 4, 3};
    const auto w = assemble_weight_matrix(p, optimal_weights(p).weights);
    CHECK(std::abs(full_spectrum(w).slem - 0.95450) <= 5e-5);
    CHECK(std::abs(oracle_slem(w) - 0.95450) <= 5e-5);
}

TEST_CASE("max-degree weights") {
    SUBCASE("path, 1/dmax") {
        const TfsGraph g({1, 1, 1, 1});
        const auto w = max_degree_weights(g, MaxDegreeConvention::inv_dmax);
        CHECK(w.entries(0, 1) == 0.5);
        // 3-node path with w = 1/2 has eigenvalues 1, 1/2, -1/2.
        const auto ev = oracle::jacobi_eigenvalues(to_oracle(w));
        CHECK(ev[0] == doctest::Approx(-0.5));
        CHECK(ev[1] == doctest::Approx(0.5));
        CHECK(oracle_slem(w) == doctest::Approx(0.5));
        CHECK(full_spectrum(w).slem == doctest::Approx(0.5));
    }
    SUBCASE("star leaves") {
        const TfsGraph g({1, 3, 1, 3});
        const auto w = max_degree_weights(g, MaxDegreeConvention::inv_dmax);
        const auto c = static_cast<Eigen::Index>(node_index(g.params(), {0, 0}));
        for (Eigen::Index v = 0; v < w.entries.rows(); ++v) {
            if (v == c) continue;
            CHECK(w.entries(v, v) == doctest::Approx(1.0 - 1.0 / 6));
            CHECK(w.entries(v, c) == doctest::Approx(1.0 / 6));
        }
        CHECK(w.entries(c, c) == doctest::Approx(0.0));
    }
    SUBCASE("table values under 1/dmax") {
        const std::pair<TfsParams, double> rows[] = {
            {{3, 4, 4, 3}, 0.98277}, {{3, 4, 3, 6}, 0.98019}, {{10, 20, 20, 10}, 0.99981}};
        for (const auto& [p, expected] : rows) {
            const auto w = max_degree_weights(TfsGraph(p), MaxDegreeConvention::inv_dmax);
            CHECK(std::abs(oracle_slem(w) - expected) <= 5e-4);
        }
    }
    SUBCASE("1/(dmax+1)") {
        const TfsGraph g({3, 4, 4, 3});
        const auto w = max_degree_weights(g, MaxDegreeConvention::inv_dmax_plus_1);
        CHECK(w.entries(0, 4) == doctest::Approx(1.0 / 8));
        CHECK(oracle_slem(w) == doctest::Approx(0.984923).epsilon(1e-5));
    }
}

TEST_CASE("metropolis weights") {
    SUBCASE("edge between two degree-2 nodes") {
        const TfsParams p{3, 4, 4, 3};
        const TfsGraph g(p);
        const auto w = metropolis_weights(g);
        const auto a = static_cast<Eigen::Index>(node_index(p, {-3, 1}));
        const auto b = static_cast<Eigen::Index>(node_index(p, {-2, 1}));
        const auto c = static_cast<Eigen::Index>(node_index(p, {-1, 1}));
        CHECK(w.entries(b, c) == doctest::Approx(1.0 / 3));
        CHECK(w.entries(a, b) == doctest::Approx(1.0 / 3));
        CHECK(w.entries(c, static_cast<Eigen::Index>(node_index(p, {0, 0}))) == doctest::Approx(1.0 / 8));
        CHECK(validate_stochastic(w).ok());
    }
    SUBCASE("orbit form equals the per-node construction") {
        for (TfsParams p : {TfsParams{3, 4, 4, 3}, TfsParams{1, 1, 2, 5}, TfsParams{2, 3, 1, 1}}) {
            const TfsGraph g(p);
            for (auto conv : {MetropolisConvention::inv_one_plus_max, MetropolisConvention::inv_max}) {
                const auto dense = metropolis_weights(g, conv);
                const auto orbit = assemble_weight_matrix(p, metropolis_orbit_weights(g, conv));
                CHECK((dense.entries - orbit.entries).cwiseAbs().maxCoeff() <= 1e-15);
            }
        }
    }
    SUBCASE("SLEM under both conventions") {
        // Dense oracle values; see the README for how these relate to the
        // published table.
        const TfsGraph g({3, 4, 4, 3});
        CHECK(oracle_slem(metropolis_weights(g)) == doctest::Approx(0.977126).epsilon(2e-6));
        CHECK(oracle_slem(metropolis_weights(g, MetropolisConvention::inv_max)) ==
              doctest::Approx(0.97195).epsilon(5e-6));
        const TfsGraph h({3, 4, 3, 6});
        CHECK(oracle_slem(metropolis_weights(h)) == doctest::Approx(0.973955).epsilon(2e-6));
        CHECK(oracle_slem(metropolis_weights(h, MetropolisConvention::inv_max)) ==
              doctest::Approx(0.97018).epsilon(5e-6));
    }
}

TEST_CASE("best-constant weights") {
    SUBCASE("path") {
        const TfsGraph g({1, 1, 1, 1});
        CHECK(best_constant_step(g.params()) == doctest::Approx(0.5));
        const auto lap = oracle::jacobi_eigenvalues([&] {
            oracle::Matrix m(3);
            const auto l = laplacian(g);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) m(i, j) = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            return m;
        }());
        CHECK(lap[0] == doctest::Approx(0.0).scale(1));
        CHECK(lap[1] == doctest::Approx(1.0));
        CHECK(lap[2] == doctest::Approx(3.0));
    }
    SUBCASE("step agrees with the dense Laplacian") {
        for (TfsParams p : {TfsParams{3, 4, 4, 3}, TfsParams{2, 1, 3, 2}, TfsParams{1, 5, 4, 1}}) {
            const TfsGraph g(p);
            const auto l = laplacian(g);
            oracle::Matrix m(static_cast<std::size_t>(l.rows()));
            for (std::size_t i = 0; i < m.n; ++i)
                for (std::size_t j = 0; j < m.n; ++j) m(i, j) = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const auto ev = oracle::jacobi_eigenvalues(m);
            CHECK(best_constant_step(p) == doctest::Approx(2.0 / (ev.back() + ev[1])).epsilon(1e-12));
        }
    }
    SUBCASE("table values") {
        const std::pair<TfsParams, double> rows[] = {
            {{3, 4, 4, 3}, 0.97089}, {{3, 4, 3, 6}, 0.96497}, {{10, 20, 20, 10}, 0.99962}};
        for (const auto& [p, expected] : rows) {
            const auto w = best_constant_weights(TfsGraph(p));
            CHECK(validate_stochastic(w).ok());
            CHECK(std::abs(oracle_slem(w) - expected) <= 5e-4);
        }
    }
}

TEST_CASE("validate_stochastic") {
    const TfsParams p{2, 2, 2, 2};
    const auto n = static_cast<Eigen::Index>(p.node_count());
    WeightMatrix id{p, Eigen::MatrixXd::Identity(n, n)};
    CHECK(validate_stochastic(id).ok(0.0));

    auto w = assemble_weight_matrix(p, OrbitWeights(p, 0.2));
    CHECK(validate_stochastic(w).max_row_sum_deviation <= 1e-12);
    w.entries(0, 2) += 1e-3;
    const auto r = validate_stochastic(w);
    CHECK(r.max_asymmetry > 0.0);
    CHECK(r.max_row_sum_deviation > 0.0);
    CHECK(r.sparsity_violations == 0);

    auto far = assemble_weight_matrix(p, OrbitWeights(p, 0.2));
    far.entries(0, n - 1) = far.entries(n - 1, 0) = 0.1;
    CHECK(validate_stochastic(far).sparsity_violations == 2);
    CHECK_FALSE(validate_stochastic(far).ok());

    WeightMatrix wrong{p, Eigen::MatrixXd::Identity(3, 3)};
    CHECK_THROWS_AS(validate_stochastic(wrong), DimensionMismatch);
}

TEST_CASE("every scheme is symmetric, stochastic, and has spectrum in [-1, 1]") {
    for (TfsParams p : {TfsParams{3, 4, 4, 3}, TfsParams{3, 4, 3, 6}, TfsParams{1, 1, 1, 1}, TfsParams{2, 5, 1, 1},
                        TfsParams{4, 2, 2, 3}}) {
        CAPTURE(p.to_string());
        const TfsGraph g(p);
        std::vector<WeightMatrix> ws{max_degree_weights(g, MaxDegreeConvention::inv_dmax),
                                     max_degree_weights(g, MaxDegreeConvention::inv_dmax_plus_1),
                                     metropolis_weights(g), metropolis_weights(g, MetropolisConvention::inv_max),
                                     best_constant_weights(g)};
        if (p.n1 >= 2 && p.n2 >= 2) ws.push_back(assemble_weight_matrix(p, optimal_weights(p).weights));
        for (const auto& w : ws) {
            CHECK(validate_stochastic(w).ok(1e-12));
            const auto ev = oracle::jacobi_eigenvalues(to_oracle(w));
            CHECK(ev.front() >= -1.0 - 1e-12);
            CHECK(ev.back() <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("star swap leaves every scheme's spectrum unchanged") {
    for (TfsParams p : {TfsParams{3, 4, 4, 3}, TfsParams{2, 3, 5, 2}, TfsParams{1, 1, 3, 4}}) {
        CAPTURE(p.to_string());
        const TfsGraph g(p);
        const TfsGraph h(p.swapped());
        auto spectrum = [](const WeightMatrix& w) { return oracle::jacobi_eigenvalues(to_oracle(w)); };
        auto same = [](const std::vector<double>& a, const std::vector<double>& b) {
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-10);
        };
        same(spectrum(max_degree_weights(g, MaxDegreeConvention::inv_dmax)),
             spectrum(max_degree_weights(h, MaxDegreeConvention::inv_dmax)));
        same(spectrum(metropolis_weights(g)), spectrum(metropolis_weights(h)));
        same(spectrum(best_constant_weights(g)), spectrum(best_constant_weights(h)));
        if (p.n1 >= 2 && p.n2 >= 2) {
            same(spectrum(assemble_weight_matrix(p, optimal_weights(p).weights)),
                 spectrum(assemble_weight_matrix(p.swapped(), optimal_weights(p.swapped()).weights)));
        }
    }
}
