#include "etgossip/topology.hpp"

#include "etgossip/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

namespace etg {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::uint64_t seed)
    : n_(n), adjacency_(n), seed_(seed) {
    if (n < 2) throw TopologyError("graph needs at least 2 nodes, got " + std::to_string(n));
    for (auto& e : edges) {
        if (e.u == e.v) throw TopologyError("self-loop at node " + std::to_string(e.u));
        if (e.u >= n || e.v >= n) {
            throw TopologyError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                ") out of range for n=" + std::to_string(n));
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw TopologyError("duplicate edge");
    }
    edges_ = std::move(edges);
    for (const auto& e : edges_) {
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop();
        for (std::size_t j : adjacency_[i]) {
            if (!seen[j]) {
                seen[j] = true;
                ++reached;
                frontier.push(j);
            }
        }
    }
    if (reached != n) {
        throw TopologyError("graph is disconnected: " + std::to_string(reached) + " of " +
                            std::to_string(n) + " nodes reachable from node 0");
    }
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
    const auto& nb = adjacency_.at(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

double Graph::realized_sparsity() const noexcept {
    const double n = static_cast<double>(n_);
    return 1.0 - (n + 2.0 * static_cast<double>(edges_.size())) / (n * n);
}

long long edges_for_sparsity(std::size_t n, double target_sparsity) {
    const double nn = static_cast<double>(n);
    return std::llround(((1.0 - target_sparsity) * nn * nn - nn) / 2.0);
}

Graph generate_topology(std::size_t n, double target_sparsity, std::uint64_t seed) {
    if (!(target_sparsity >= 0.0 && target_sparsity < 1.0)) {
        throw TopologyError("target sparsity must lie in [0, 1)");
    }
    if (n < 2) throw TopologyError("graph needs at least 2 nodes, got " + std::to_string(n));
    const long long m = edges_for_sparsity(n, target_sparsity);
    if (m < static_cast<long long>(n) - 1) {
        throw TopologyError("sparsity " + std::to_string(target_sparsity) + " implies " +
                            std::to_string(m) + " edges, fewer than the " +
                            std::to_string(n - 1) + " needed for connectivity");
    }
    return generate_topology_with_edges(n, static_cast<std::size_t>(m), seed);
}

Graph generate_topology_with_edges(std::size_t n, std::size_t edge_count, std::uint64_t seed) {
    if (n < 2) throw TopologyError("graph needs at least 2 nodes, got " + std::to_string(n));
    const std::size_t max_edges = n * (n - 1) / 2;
    if (edge_count < n - 1 || edge_count > max_edges) {
        throw TopologyError("edge count " + std::to_string(edge_count) + " outside [" +
                            std::to_string(n - 1) + ", " + std::to_string(max_edges) + "]");
    }
    RandomStream rng = RandomStream::derive(seed, Purpose::topology, {n, edge_count});

    // Decoding a uniform Pruefer sequence gives a uniform labelled spanning tree.
    std::vector<Edge> edges;
    edges.reserve(edge_count);
    if (n == 2) {
        edges.push_back({0, 1});
    } else {
        std::vector<std::size_t> code(n - 2);
        for (auto& c : code) c = static_cast<std::size_t>(rng.below(n));
        std::vector<std::size_t> remaining(n, 1);
        for (std::size_t c : code) ++remaining[c];
        for (std::size_t c : code) {
            std::size_t leaf = 0;
            while (remaining[leaf] != 1) ++leaf;
            edges.push_back({std::min(leaf, c), std::max(leaf, c)});
            --remaining[leaf];
            --remaining[c];
        }
        std::size_t a = n, b = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (remaining[i] == 1) (a == n ? a : b) = i;
        }
        edges.push_back({a, b});
    }

    std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
    for (const auto& e : edges) present[e.u][e.v] = true;
    std::vector<Edge> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!present[i][j]) candidates.push_back({i, j});
        }
    }
    const std::size_t extra = edge_count - edges.size();
    // Partial Fisher-Yates: the first `extra` slots are a uniform sample.
    for (std::size_t k = 0; k < extra; ++k) {
        const std::size_t pick = k + static_cast<std::size_t>(rng.below(candidates.size() - k));
        std::swap(candidates[k], candidates[pick]);
        edges.push_back(candidates[k]);
    }
    return Graph(n, std::move(edges), seed);
}

MixingMatrix MixingMatrix::from_weights(Matrix w) {
    if (w.rows() != w.cols() || w.rows() < 2) {
        throw DimensionError("mixing matrix must be square with n >= 2");
    }
    const double delta = spectral_contraction(w);
    if (!(delta < 1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << std::setprecision(17) << "spectral contraction factor " << delta
            << " is not below 1 (disconnected or periodic support)";
        throw AssumptionViolation(msg.str());
    }
    return MixingMatrix(std::move(w), delta);
}

MixingMatrix metropolis_mixing(const Graph& g) {
    const std::size_t n = g.size();
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : g.edges()) {
        const double weight = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(e.u), g.degree(e.v))));
        w(e.u, e.v) = weight;
        w(e.v, e.u) = weight;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j : g.neighbors(i)) off += w(i, j);
        w(i, i) = 1.0 - off;
    }
    return MixingMatrix::from_weights(std::move(w));
}

namespace {

Matrix averaging_projector(Eigen::Index n) {
    return Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

double spectral_norm(const Matrix& m) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
        return eig.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace

double spectral_contraction(const Matrix& w) {
    const double norm = spectral_norm(w - averaging_projector(w.rows()));
    return norm * norm;
}

double contraction_power_check(const MixingMatrix& w, std::size_t t) {
    const auto n = static_cast<Eigen::Index>(w.size());
    Matrix power = Matrix::Identity(n, n);
    for (std::size_t k = 0; k < t; ++k) power = power * w.weights();
    return spectral_norm(power - averaging_projector(n));
}

bool ValidationReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::check(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw std::out_of_range("no validation check named " + name);
}

ValidationReport validate_mixing(const Matrix& w, const Graph& g) {
    constexpr double kStochasticTol = 1e-12;
    constexpr double kSymmetryTol = 1e-15;
    ValidationReport report;
    const auto n = static_cast<Eigen::Index>(g.size());
    if (w.rows() != n || w.cols() != n) {
        report.checks.push_back({"shape", false, std::numeric_limits<double>::infinity()});
        return report;
    }

    const double row_dev = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col_dev = (w.colwise().sum().array() - 1.0).abs().maxCoeff();
    const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
    const double negative = std::max(0.0, -w.minCoeff());
    double off_support = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && !g.has_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
                off_support = std::max(off_support, std::abs(w(i, j)));
            }
        }
    }
    const double delta = spectral_contraction(w);

    report.checks.push_back({"row_stochastic", row_dev <= kStochasticTol, row_dev});
    report.checks.push_back({"column_stochastic", col_dev <= kStochasticTol, col_dev});
    report.checks.push_back({"symmetric", asym <= kSymmetryTol, asym});
    report.checks.push_back({"nonnegative", negative == 0.0, negative});
    report.checks.push_back({"support", off_support == 0.0, off_support});
    report.checks.push_back({"contraction", delta < 1.0, delta});
    return report;
}

void write_topology(std::ostream& out, const Graph& g, const MixingMatrix& w) {
    out << g.size() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (j) out << ' ';
            out << w(i, j);
        }
        out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

TopologyFile read_topology(std::istream& in) {
    std::size_t n = 0, m = 0;
    if (!(in >> n >> m)) throw TopologyError("topology file: missing 'n m' header");
    std::vector<Edge> edges(m);
    for (auto& e : edges) {
        if (!(in >> e.u >> e.v)) throw TopologyError("topology file: truncated edge list");
    }
    Graph g(n, std::move(edges));
    Matrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (!(in >> w(i, j))) throw TopologyError("topology file: truncated weight matrix");
        }
    }
    return TopologyFile{std::move(g), MixingMatrix::from_weights(std::move(w))};
}

}  // namespace etg
