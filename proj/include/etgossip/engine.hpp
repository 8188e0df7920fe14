#pragma once

#include "etgossip/common.hpp"
#include "etgossip/objectives.hpp"
#include "etgossip/policy.hpp"
#include "etgossip/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace etg {

// The entire per-node protocol memory.
//
// `caches` holds one slot per neighbor and never one for the node itself;
// mixing always uses the live `x` for the self term. Under the event-triggered
// scheme a slot is the last model received from that neighbor. Under the
// schemes that self-substitute a missing message (periodic off-rounds,
// probabilistic, variable-working) the slot holds whatever the receiver mixes
// in for that neighbor this round, i.e. its own current model when nothing
// arrived.
struct NodeState {
    std::size_t node_id = 0;
    Vector x;
    Vector snapshot;
    std::map<std::size_t, Vector> caches;
};

// Identical start x_{i,0} = x0, snapshots x0, every cache x0.
std::vector<NodeState> initialize_states(const Graph& g, const Vector& x0);

Vector compute_drift(const NodeState& s);

// sum_j W_ji x~_{j->i} with the live x for j = i. `w_column` is column i of W.
// Throws Error if a positively weighted neighbor has no cache.
Vector mix_with_caches(const NodeState& s, const Eigen::Ref<const Vector>& w_column);

struct LinkError {
    std::size_t sender = 0;
    std::size_t receiver = 0;
    double norm = 0.0;
};

struct RoundTrace {
    std::size_t t = 0;
    double tau_t = 0.0;
    // Nodes that broadcast this round (event-triggered, periodic, variable-working).
    std::vector<std::size_t> triggered;
    std::uint64_t transmissions = 0;
    // ||v_{j->i,t}|| for every directed edge.
    std::vector<LinkError> v_norms;
    double ebar_norm = 0.0;
    // The following are evaluated at the pre-round iterate X_t.
    double consensus_energy = 0.0;
    double grad_norm_sq = 0.0;
    double f_avg = 0.0;
};

// Everything needed to replay one round through the matrix form.
struct RoundOutcome {
    RoundTrace trace;
    Matrix models;       // X_t
    Matrix gradients;    // G_t (zero column for an idle node)
    Matrix obsolescence; // V_t
};

// Fixed inputs of one run. Rounds draw from substreams keyed by (seed, rep).
struct RoundContext {
    const Graph& graph;
    const MixingMatrix& mixing;
    const CommunicationPolicy& policy;
    const ObjectiveSuite& objective;
    double eta = 0.0;
    double x0_norm = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t rep = 0;
};

// One synchronous round: trigger tests and broadcasts on the current models,
// cache updates, stochastic gradients at the pre-mix models, then
// x_{i,t+1} = mix_i - eta g_i for every working node.
RoundOutcome run_round(std::vector<NodeState>& states, const RoundContext& ctx, std::size_t t);

// Columns are node models.
Matrix stack_models(const std::vector<NodeState>& states);

// Column i is sum_j W_ji (x~_{j->i} - x_j). Call after cache updates and
// before the model update.
Matrix obsolescence_matrix(const std::vector<NodeState>& states, const MixingMatrix& w);

// X W - eta G + V.
Matrix matrix_reference_step(const Matrix& x, const Matrix& w, const Matrix& g, const Matrix& v,
                             double eta);

Vector average_iterate(const Matrix& x);
Vector average_perturbation(const Matrix& v);
// (1/n) sum_i ||x_i - x_bar||^2
double consensus_energy(const Matrix& x);

}  // namespace etg
