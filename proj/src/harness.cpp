#include "etgossip/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace etg {

namespace {

Graph make_graph(const ExperimentConfig& cfg) {
    if (cfg.edge_count) return generate_topology_with_edges(cfg.n, *cfg.edge_count, cfg.seed);
    return generate_topology(cfg.n, cfg.sparsity, cfg.seed);
}

std::shared_ptr<const ObjectiveSuite> make_objective(const ExperimentConfig& cfg) {
    const auto& o = cfg.objective;
    if (o.kind == "logistic") {
        return std::make_shared<LogisticSuite>(
            make_logistic_suite(cfg.n, cfg.d, o.samples, o.skew, o.lambda, o.batch, cfg.seed));
    }
    return std::make_shared<QuadraticSuite>(make_quadratic_suite(cfg.n, cfg.d, o.spread, o.alpha, cfg.seed));
}

Vector make_initial_model(const ExperimentConfig& cfg) {
    RandomStream rng = RandomStream::derive(cfg.seed, Purpose::init, {cfg.d});
    Vector x0(static_cast<Eigen::Index>(cfg.d));
    for (Eigen::Index k = 0; k < x0.size(); ++k) x0(k) = cfg.init_scale * rng.normal();
    return x0;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExperimentSetup build_setup(const ExperimentConfig& cfg) {
    Graph graph = make_graph(cfg);
    MixingMatrix mixing = metropolis_mixing(graph);
    auto objective = make_objective(cfg);
    const auto* quadratic = dynamic_cast<const QuadraticSuite*>(objective.get());
    CommunicationPolicy policy = make_policy(cfg.policy, cfg.n);
    Vector x0 = make_initial_model(cfg);
    const double x0_norm = x0.norm();

    ExperimentSetup setup{std::move(graph), std::move(mixing), objective, quadratic,
                          std::move(policy), std::move(x0), x0_norm, 0.0, {}, {}, {}};
    if (setup.policy.kind == PolicyKind::event_triggered) {
        setup.thresholds = threshold_sequence(setup.policy.schedule, cfg.rounds, x0_norm);
    } else {
        setup.thresholds.assign(cfg.rounds, 0.0);
    }

    std::optional<TheoryConstants> theory;
    if (quadratic) {
        TheoryConstants c;
        c.n = cfg.n;
        c.lipschitz = quadratic->lipschitz();
        c.alpha = quadratic->alpha();
        c.beta = std::sqrt(quadratic->beta_sq());
        c.delta = setup.mixing.delta();
        c.f0_gap = std::max(0.0, quadratic->global_value(setup.x0) - quadratic->optimal_value());
        theory = c;
    }

    if (cfg.eta) {
        setup.eta = *cfg.eta;
    } else {
        if (!theory) throw ConfigError("prescribed stepsizes need the quadratic objective");
        std::vector<double> taus = setup.thresholds;
        if (*cfg.stepsize_case == StepsizeCase::A) std::fill(taus.begin(), taus.end(), 0.0);
        setup.eta = case_coefficients(*cfg.stepsize_case, *theory, taus).eta;
    }

    if (theory) {
        theory->eta = setup.eta;
        setup.theory = theory;
        if (setup.policy.kind == PolicyKind::event_triggered && stability_constants(*theory).applicable()) {
            setup.bound_rhs = ergodic_bound_rhs(*theory, setup.thresholds);
        }
    }
    return setup;
}

std::uint64_t count_full_comm(const Graph& g, std::uint64_t rounds) {
    return 2ULL * g.edge_count() * rounds;
}

RunSummary run_single(const ExperimentSetup& setup, const ExperimentConfig& cfg, std::uint64_t rep,
                      std::vector<MetricsRow>* rows) {
    auto states = initialize_states(setup.graph, setup.x0);
    const RoundContext ctx{setup.graph, setup.mixing, setup.policy, *setup.objective,
                           setup.eta,   setup.x0_norm, cfg.seed,   rep};
    RunSummary summary;
    summary.rep = rep;
    double grad_sum = 0.0;
    for (std::size_t t = 0; t < cfg.rounds; ++t) {
        const RoundOutcome round = run_round(states, ctx, t);
        const RoundTrace& tr = round.trace;
        summary.total_transmissions += tr.transmissions;
        grad_sum += tr.grad_norm_sq;
        if (rows) {
            rows->push_back({rep, t, summary.total_transmissions, tr.consensus_energy, tr.grad_norm_sq,
                             tr.ebar_norm, tr.tau_t, tr.f_avg});
        }
    }
    const Matrix final_models = stack_models(states);
    summary.final_f_avg = setup.objective->global_value(average_iterate(final_models));
    summary.final_consensus = consensus_energy(final_models);
    summary.ergodic_grad_mean = grad_sum / static_cast<double>(cfg.rounds);
    return summary;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const ExperimentSetup setup = build_setup(cfg);
    ExperimentResult result;
    result.eta = setup.eta;
    result.bound_rhs = setup.bound_rhs;
    result.rows.reserve(cfg.reps * cfg.rounds);
    for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
        result.runs.push_back(run_single(setup, cfg, rep, &result.rows));
    }
    return result;
}

MetricStats summarize(std::span<const double> values) {
    MetricStats s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::vector<AggregateRow> monte_carlo_summary(std::span<const MetricsRow> rows) {
    // Fixed (t, rep) order makes floating-point sums independent of input order.
    std::map<std::uint64_t, std::map<std::uint64_t, const MetricsRow*>> by_round;
    for (const auto& r : rows) by_round[r.t][r.rep] = &r;

    std::vector<AggregateRow> out;
    out.reserve(by_round.size());
    std::vector<double> buf;
    for (const auto& [t, reps] : by_round) {
        AggregateRow agg;
        agg.t = t;
        agg.count = reps.size();
        auto stat = [&](auto field) {
            buf.clear();
            for (const auto& [rep, row] : reps) buf.push_back(static_cast<double>(field(*row)));
            return summarize(buf);
        };
        agg.transmissions_cum = stat([](const MetricsRow& r) { return r.transmissions_cum; });
        agg.consensus_energy = stat([](const MetricsRow& r) { return r.consensus_energy; });
        agg.grad_norm_sq = stat([](const MetricsRow& r) { return r.grad_norm_sq; });
        agg.ebar_norm = stat([](const MetricsRow& r) { return r.ebar_norm; });
        agg.tau_t = stat([](const MetricsRow& r) { return r.tau_t; });
        agg.f_avg = stat([](const MetricsRow& r) { return r.f_avg; });
        out.push_back(agg);
    }
    return out;
}

void write_csv(std::ostream& out, std::span<const MetricsRow> rows) {
    out << kMetricsHeader << '\n';
    for (const auto& r : rows) {
        out << r.rep << ',' << r.t << ',' << r.transmissions_cum << ',' << format_double(r.consensus_energy)
            << ',' << format_double(r.grad_norm_sq) << ',' << format_double(r.ebar_norm) << ','
            << format_double(r.tau_t) << ',' << format_double(r.f_avg) << '\n';
    }
}

void emit_csv(std::span<const MetricsRow> rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv(out, rows);
    out.flush();
    if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<MetricsRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) throw Error("metrics CSV: bad or missing header");
    std::vector<MetricsRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw Error("metrics CSV line " + std::to_string(line_no) + ": expected 8 fields");
        try {
            MetricsRow r;
            r.rep = std::stoull(fields[0]);
            r.t = std::stoull(fields[1]);
            r.transmissions_cum = std::stoull(fields[2]);
            r.consensus_energy = std::stod(fields[3]);
            r.grad_norm_sq = std::stod(fields[4]);
            r.ebar_norm = std::stod(fields[5]);
            r.tau_t = std::stod(fields[6]);
            r.f_avg = std::stod(fields[7]);
            rows.push_back(r);
        } catch (const std::logic_error&) {
            throw Error("metrics CSV line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
    const double bound = result.bound_rhs.value_or(std::numeric_limits<double>::quiet_NaN());
    out << kSummaryHeader << '\n';
    std::vector<double> tx, f, g, m;
    for (const auto& r : result.runs) {
        out << r.rep << ',' << r.total_transmissions << ',' << format_double(r.final_f_avg) << ','
            << format_double(r.ergodic_grad_mean) << ',' << format_double(r.final_consensus) << ','
            << format_double(result.eta) << ',' << format_double(bound) << '\n';
        tx.push_back(static_cast<double>(r.total_transmissions));
        f.push_back(r.final_f_avg);
        g.push_back(r.ergodic_grad_mean);
        m.push_back(r.final_consensus);
    }
    const MetricStats stats[] = {summarize(tx), summarize(f), summarize(g), summarize(m)};
    out << "mean";
    for (const auto& s : stats) out << ',' << format_double(s.mean);
    out << ',' << format_double(result.eta) << ',' << format_double(bound) << '\n';
    out << "std";
    for (const auto& s : stats) out << ',' << format_double(s.std);
    out << ",0,0\n";
}

void emit_summary_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_summary_csv(out, result);
    out.flush();
    if (!out) throw Error("failed writing '" + path + "'");
}

std::string summary_path_for(const std::string& metrics_path) {
    const auto slash = metrics_path.find_last_of('/');
    const auto dot = metrics_path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return metrics_path.substr(0, dot) + ".summary" + metrics_path.substr(dot);
    }
    return metrics_path + ".summary.csv";
}

}  // namespace etg
