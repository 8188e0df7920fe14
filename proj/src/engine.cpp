#include "etgossip/engine.hpp"

#include <string>

namespace etg {

std::vector<NodeState> initialize_states(const Graph& g, const Vector& x0) {
    std::vector<NodeState> states(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto& s = states[i];
        s.node_id = i;
        s.x = x0;
        s.snapshot = x0;
        for (std::size_t j : g.neighbors(i)) s.caches.emplace(j, x0);
    }
    return states;
}

Vector compute_drift(const NodeState& s) {
    return s.x - s.snapshot;
}

Vector mix_with_caches(const NodeState& s, const Eigen::Ref<const Vector>& w_column) {
    Vector mixed = w_column(static_cast<Eigen::Index>(s.node_id)) * s.x;
    for (Eigen::Index j = 0; j < w_column.size(); ++j) {
        const auto sender = static_cast<std::size_t>(j);
        if (sender == s.node_id || w_column(j) == 0.0) continue;
        const auto it = s.caches.find(sender);
        if (it == s.caches.end()) {
            throw Error("node " + std::to_string(s.node_id) + " has no cache for neighbor " +
                        std::to_string(sender) + " with positive weight");
        }
        mixed += w_column(j) * it->second;
    }
    return mixed;
}

Matrix stack_models(const std::vector<NodeState>& states) {
    if (states.empty()) return {};
    Matrix x(states.front().x.size(), static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = states[i].x;
    return x;
}

Matrix obsolescence_matrix(const std::vector<NodeState>& states, const MixingMatrix& w) {
    const auto n = static_cast<Eigen::Index>(states.size());
    const Eigen::Index d = states.empty() ? 0 : states.front().x.size();
    Matrix v = Matrix::Zero(d, n);
    for (const auto& receiver : states) {
        auto col = v.col(static_cast<Eigen::Index>(receiver.node_id));
        for (const auto& [sender, cached] : receiver.caches) {
            const double weight = w(sender, receiver.node_id);
            if (weight != 0.0) col += weight * (cached - states[sender].x);
        }
    }
    return v;
}

Matrix matrix_reference_step(const Matrix& x, const Matrix& w, const Matrix& g, const Matrix& v,
                             double eta) {
    if (w.rows() != w.cols() || x.cols() != w.rows() || g.rows() != x.rows() || g.cols() != x.cols() ||
        v.rows() != x.rows() || v.cols() != x.cols()) {
        throw DimensionError("matrix_reference_step: shape mismatch");
    }
    return x * w - eta * g + v;
}

Vector average_iterate(const Matrix& x) {
    return x.rowwise().mean();
}

Vector average_perturbation(const Matrix& v) {
    return v.rowwise().mean();
}

double consensus_energy(const Matrix& x) {
    const Vector mean = x.rowwise().mean();
    return (x.colwise() - mean).squaredNorm() / static_cast<double>(x.cols());
}

RoundOutcome run_round(std::vector<NodeState>& states, const RoundContext& ctx, std::size_t t) {
    const Graph& g = ctx.graph;
    const std::size_t n = g.size();
    const auto& policy = ctx.policy;
    if (states.size() != n || ctx.mixing.size() != n) {
        throw DimensionError("run_round: states, graph and mixing matrix disagree on n");
    }
    if (ctx.objective.nodes() != n) throw DimensionError("run_round: objective has wrong node count");
    const auto d = static_cast<Eigen::Index>(ctx.objective.dim());
    for (const auto& s : states) {
        if (s.x.size() != d) throw DimensionError("run_round: model dimension differs from objective");
    }
    if (policy.kind == PolicyKind::probabilistic &&
        (policy.link_prob.rows() != static_cast<Eigen::Index>(n) ||
         policy.link_prob.cols() != static_cast<Eigen::Index>(n))) {
        throw DimensionError("run_round: link probability matrix must be n x n");
    }

    RoundOutcome out;
    RoundTrace& trace = out.trace;
    trace.t = t;
    trace.tau_t = policy.kind == PolicyKind::event_triggered
                      ? threshold_at(policy.schedule, t, ctx.x0_norm)
                      : 0.0;
    out.models = stack_models(states);

    // Step 1: who works and who broadcasts, decided on the current models.
    std::vector<bool> working(n, true);
    std::vector<bool> broadcasts(n, false);
    switch (policy.kind) {
        case PolicyKind::event_triggered:
            for (std::size_t i = 0; i < n; ++i) {
                broadcasts[i] = event_trigger_decision(states[i].x, states[i].snapshot, trace.tau_t);
            }
            break;
        case PolicyKind::periodic: {
            const bool on = periodic_decision(t, policy.period_kp);
            std::fill(broadcasts.begin(), broadcasts.end(), on);
            break;
        }
        case PolicyKind::variable_working:
            for (std::size_t i = 0; i < n; ++i) {
                RandomStream stream = activation_stream(ctx.seed, ctx.rep, t, i);
                working[i] = activation_decision(stream, policy.activation_prob);
                broadcasts[i] = working[i];
            }
            break;
        case PolicyKind::probabilistic:
            break;
    }

    // Step 1 (cont.): broadcasts and receiver cache updates.
    if (policy.kind == PolicyKind::probabilistic) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j : g.neighbors(i)) {
                RandomStream stream = link_stream(ctx.seed, ctx.rep, t, j, i);
                const bool delivered = probabilistic_decision(stream, policy.link_prob(j, i));
                if (delivered) ++trace.transmissions;
                states[i].caches.at(j) = delivered ? states[j].x : states[i].x;
            }
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            if (!broadcasts[j]) continue;
            trace.triggered.push_back(j);
            trace.transmissions += g.degree(j);
            states[j].snapshot = states[j].x;
        }
        const bool self_substitute = policy.kind != PolicyKind::event_triggered;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j : g.neighbors(i)) {
                if (broadcasts[j] && working[i]) {
                    states[i].caches.at(j) = states[j].x;
                } else if (self_substitute) {
                    states[i].caches.at(j) = states[i].x;
                }
            }
        }
    }

    // Step 2: stochastic gradients at the pre-mix models.
    out.gradients = Matrix::Zero(d, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!working[i]) continue;
        RandomStream stream = gradient_stream(ctx.seed, ctx.rep, t, i);
        out.gradients.col(static_cast<Eigen::Index>(i)) =
            ctx.objective.stochastic_gradient(i, states[i].x, stream);
    }

    out.obsolescence = obsolescence_matrix(states, ctx.mixing);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [j, cached] : states[i].caches) {
            trace.v_norms.push_back({j, i, (cached - states[j].x).norm()});
        }
    }

    const Vector mean = average_iterate(out.models);
    trace.consensus_energy = consensus_energy(out.models);
    trace.grad_norm_sq = ctx.objective.global_gradient(mean).squaredNorm();
    trace.f_avg = ctx.objective.global_value(mean);
    trace.ebar_norm = average_perturbation(out.obsolescence).norm();

    // Step 3: mix against the frozen caches, then update.
    std::vector<Vector> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = mix_with_caches(states[i], ctx.mixing.weights().col(static_cast<Eigen::Index>(i))) -
                  ctx.eta * out.gradients.col(static_cast<Eigen::Index>(i));
    }
    for (std::size_t i = 0; i < n; ++i) states[i].x = std::move(next[i]);
    return out;
}

}  // namespace etg
