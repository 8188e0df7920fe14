#include "etgossip/topology.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace etg;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Independent route to ||W^t - J||_2: power of the eigenvalues of W other
// than the one belonging to the all-ones eigenvector.
double eigen_power_norm(const Matrix& w, std::size_t t) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
    const double n = static_cast<double>(w.rows());
    const Vector ones = Vector::Ones(w.rows()) / std::sqrt(n);
    double worst = 0.0;
    bool skipped = false;
    for (Eigen::Index k = 0; k < w.rows(); ++k) {
        const double overlap = std::abs(eig.eigenvectors().col(k).dot(ones));
        if (!skipped && std::abs(eig.eigenvalues()(k) - 1.0) < 1e-9 && overlap > 1.0 - 1e-9) {
            skipped = true;
            continue;
        }
        worst = std::max(worst, std::abs(eig.eigenvalues()(k)));
    }
    return std::pow(worst, static_cast<double>(t));
}

}  // namespace

TEST_CASE("graph construction rejects invalid edge sets") {
    CHECK_THROWS_AS(Graph(1, {}), TopologyError);
    CHECK_THROWS_AS(Graph(3, {{0, 0}, {0, 1}, {1, 2}}), TopologyError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}, {1, 2}}), TopologyError);
    CHECK_THROWS_AS(Graph(4, {{0, 1}, {2, 3}}), TopologyError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 5}}), TopologyError);
    const Graph g(3, {{2, 1}, {1, 0}});
    CHECK(g.edges().front() == Edge{0, 1});
    CHECK(g.degree(1) == 2);
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("generate_topology edge counts") {
    SUBCASE("two nodes, no sparsity: the single edge") {
        for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
            const Graph g = generate_topology(2, 0.0, seed);
            REQUIRE(g.edge_count() == 1);
            CHECK(g.edges()[0] == Edge{0, 1});
        }
    }
    SUBCASE("n=20, s=0.3 gives (0.7*400-20)/2 = 130 edges") {
        CHECK(edges_for_sparsity(20, 0.3) == 130);
        CHECK(generate_topology(20, 0.3, 5).edge_count() == 130);
    }
    SUBCASE("n=4, s=0.9 cannot be connected") {
        CHECK(edges_for_sparsity(4, 0.9) < 3);
        CHECK_THROWS_AS(generate_topology(4, 0.9, 0), TopologyError);
    }
    SUBCASE("explicit edge count override") {
        const Graph g = generate_topology_with_edges(20, 133, 11);
        CHECK(g.edge_count() == 133);
        CHECK_THROWS_AS(generate_topology_with_edges(20, 18, 11), TopologyError);
        CHECK_THROWS_AS(generate_topology_with_edges(5, 11, 11), TopologyError);
    }
    SUBCASE("complete and tree extremes") {
        CHECK(generate_topology_with_edges(6, 15, 2).edge_count() == 15);
        CHECK(generate_topology_with_edges(6, 5, 2).edge_count() == 5);
    }
}

TEST_CASE("generate_topology is deterministic and seed dependent") {
    for (std::size_t n : {6u, 10u, 25u}) {
        const Graph a = generate_topology(n, 0.5, 42);
        const Graph b = generate_topology(n, 0.5, 42);
        CHECK(a.edges() == b.edges());
    }
    CHECK(generate_topology(25, 0.5, 1).edges() != generate_topology(25, 0.5, 2).edges());
}

TEST_CASE("edge-count formula holds whenever feasible") {
    for (std::size_t n = 2; n <= 30; n += 4) {
        for (double s : {0.0, 0.2, 0.45, 0.7}) {
            const long long m = edges_for_sparsity(n, s);
            if (m < static_cast<long long>(n) - 1) continue;
            const Graph g = generate_topology(n, s, n * 7 + 1);
            CHECK(static_cast<long long>(g.edge_count()) == m);
        }
    }
}

TEST_CASE("metropolis weights on small graphs") {
    SUBCASE("2-node path") {
        const auto w = metropolis_mixing(Graph(2, {{0, 1}}));
        CHECK(w(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(w(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(w(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("K3 is the averaging matrix") {
        const auto w = metropolis_mixing(Graph(3, {{0, 1}, {0, 2}, {1, 2}}));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) CHECK(w(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        }
        CHECK(w.delta() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("3-star centred at 0") {
        const auto w = metropolis_mixing(Graph(3, {{0, 1}, {0, 2}}));
        CHECK(w(0, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(w(0, 2) == doctest::Approx(1.0 / 3.0));
        CHECK(w(1, 2) == 0.0);
        CHECK(w(0, 0) == doctest::Approx(1.0 / 3.0));
        CHECK(w(1, 1) == doctest::Approx(2.0 / 3.0));
        CHECK(w(2, 2) == doctest::Approx(2.0 / 3.0));
    }
}

TEST_CASE("metropolis output satisfies every mixing invariant") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 2 + seed % 29;
        const Graph g = generate_topology_with_edges(n, n - 1 + seed % (n * (n - 1) / 2 - n + 2), seed);
        const auto w = metropolis_mixing(g);
        const auto report = validate_mixing(w.weights(), g);
        INFO("seed " << seed << " n " << n);
        CHECK(report.ok());
        CHECK(report.check("row_stochastic").worst <= 1e-12);
        CHECK(report.check("symmetric").worst == 0.0);
        CHECK(w.delta() < 1.0);
    }
}

TEST_CASE("spectral contraction examples") {
    CHECK(spectral_contraction(Matrix::Constant(3, 3, 1.0 / 3.0)) == doctest::Approx(0.0));
    // eigenvalues {1, 0.8} -> 0.8^2
    CHECK(spectral_contraction(mat2(0.9, 0.1, 0.1, 0.9)) == doctest::Approx(0.64).epsilon(1e-13));
    CHECK(spectral_contraction(Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(MixingMatrix::from_weights(Matrix::Identity(2, 2)), AssumptionViolation);
}

TEST_CASE("contraction power check") {
    const auto w = MixingMatrix::from_weights(mat2(0.9, 0.1, 0.1, 0.9));
    CHECK(contraction_power_check(w, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(contraction_power_check(w, 2) == doctest::Approx(0.64).epsilon(1e-13));
    const auto avg = MixingMatrix::from_weights(Matrix::Constant(3, 3, 1.0 / 3.0));
    CHECK(contraction_power_check(avg, 5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(contraction_power_check(avg, 0) == doctest::Approx(1.0));
}

TEST_CASE("power check equals (sqrt delta)^t on random graphs") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const std::size_t n = 4 + seed % 27;
        const Graph g = generate_topology(n, 0.3, seed);
        const auto w = metropolis_mixing(g);
        for (std::size_t t = 0; t <= 20; ++t) {
            const double lhs = contraction_power_check(w, t);
            CHECK(std::abs(lhs - std::pow(std::sqrt(w.delta()), static_cast<double>(t))) <= 1e-8);
            CHECK(std::abs(lhs - eigen_power_norm(w.weights(), t)) <= 1e-8);
        }
    }
}

TEST_CASE("validate_mixing flags constructed violations") {
    const Graph g = generate_topology(6, 0.4, 3);
    const auto w = metropolis_mixing(g);

    SUBCASE("row scaled by 1.01") {
        Matrix bad = w.weights();
        bad.row(2) *= 1.01;
        const auto r = validate_mixing(bad, g);
        CHECK_FALSE(r.check("row_stochastic").passed);
        CHECK(r.check("row_stochastic").worst == doctest::Approx(0.01).epsilon(1e-9));
        CHECK_FALSE(r.ok());
    }
    SUBCASE("weight on a non-edge") {
        std::size_t a = 0, b = 0;
        for (std::size_t i = 0; i < 6 && a == b; ++i) {
            for (std::size_t j = i + 1; j < 6; ++j) {
                if (!g.has_edge(i, j)) {
                    a = i;
                    b = j;
                    break;
                }
            }
        }
        REQUIRE(a != b);
        Matrix bad = w.weights();
        bad(a, b) += 0.05;
        bad(b, a) += 0.05;
        bad(a, a) -= 0.05;
        bad(b, b) -= 0.05;
        const auto r = validate_mixing(bad, g);
        CHECK_FALSE(r.check("support").passed);
        CHECK(r.check("support").worst == doctest::Approx(0.05));
        CHECK(r.check("row_stochastic").passed);
    }
    SUBCASE("identity has delta = 1") {
        const auto r = validate_mixing(Matrix::Identity(6, 6), g);
        CHECK_FALSE(r.check("contraction").passed);
        CHECK(r.check("support").passed);
    }
}

TEST_CASE("topology text format round trip") {
    const Graph g = generate_topology(7, 0.3, 9);
    const auto w = metropolis_mixing(g);
    std::stringstream buf;
    write_topology(buf, g, w);
    const std::string first = buf.str();
    const auto loaded = read_topology(buf);
    CHECK(loaded.graph.edges() == g.edges());
    CHECK((loaded.mixing.weights() - w.weights()).cwiseAbs().maxCoeff() == 0.0);
    std::stringstream again;
    write_topology(again, loaded.graph, loaded.mixing);
    CHECK(again.str() == first);

    std::istringstream truncated("3 2\n0 1\n1 2\n0.5 0.5\n");
    CHECK_THROWS_AS(read_topology(truncated), TopologyError);
}

TEST_CASE("realized sparsity") {
    const Graph g = generate_topology_with_edges(20, 133, 1);
    CHECK(g.realized_sparsity() == doctest::Approx(1.0 - (20.0 + 266.0) / 400.0));
}
