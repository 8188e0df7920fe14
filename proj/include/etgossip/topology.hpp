#pragma once

#include "etgossip/common.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace etg {

// Unordered node pair, stored with u < v.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Static, undirected, connected communication graph.
class Graph {
public:
    // Throws TopologyError for n < 2, self-loops, duplicate or out-of-range
    // edges, or a disconnected edge set. Edges are normalized and sorted.
    Graph(std::size_t n, std::vector<Edge> edges, std::uint64_t seed = 0);

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_.at(i); }
    std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
    bool has_edge(std::size_t i, std::size_t j) const;
    std::uint64_t seed() const noexcept { return seed_; }

    // Fraction of structurally zero entries of a mixing matrix on this graph.
    double realized_sparsity() const noexcept;

private:
    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::uint64_t seed_;
};

// Number of edges that realizes a target sparsity: round(((1-s) n^2 - n) / 2).
// May be negative for infeasible requests.
long long edges_for_sparsity(std::size_t n, double target_sparsity);

// Uniform random labelled spanning tree plus uniformly chosen extra edges.
// Throws TopologyError if the edge count cannot give a connected simple graph.
Graph generate_topology(std::size_t n, double target_sparsity, std::uint64_t seed);
Graph generate_topology_with_edges(std::size_t n, std::size_t edge_count, std::uint64_t seed);

// Symmetric doubly stochastic weights supported on a graph.
class MixingMatrix {
public:
    // Computes delta; throws AssumptionViolation if delta >= 1.
    static MixingMatrix from_weights(Matrix w);

    const Matrix& weights() const noexcept { return w_; }
    double delta() const noexcept { return delta_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return w_(i, j); }

private:
    MixingMatrix(Matrix w, double delta) : w_(std::move(w)), delta_(delta) {}

    Matrix w_;
    double delta_;
};

// Metropolis-Hastings weights: W_ij = 1 / (1 + max(d_i, d_j)) on edges.
MixingMatrix metropolis_mixing(const Graph& g);

// ||W - J||_2^2 with J = 11^T / n, via symmetric eigendecomposition.
double spectral_contraction(const Matrix& w);

// ||W^t - J||_2 from an explicit matrix power.
double contraction_power_check(const MixingMatrix& w, std::size_t t);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const noexcept;
    // Throws std::out_of_range for an unknown check name.
    const ValidationCheck& check(const std::string& name) const;
};

// Checks row_stochastic, column_stochastic, symmetric, nonnegative,
// support and contraction (delta < 1).
ValidationReport validate_mixing(const Matrix& w, const Graph& g);

// Plain-text format: "n m", m lines "i j", n lines of n weights.
void write_topology(std::ostream& out, const Graph& g, const MixingMatrix& w);

struct TopologyFile {
    Graph graph;
    MixingMatrix mixing;
};

TopologyFile read_topology(std::istream& in);

}  // namespace etg
