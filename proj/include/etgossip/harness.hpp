#pragma once

#include "etgossip/config.hpp"
#include "etgossip/engine.hpp"
#include "etgossip/objectives.hpp"
#include "etgossip/theory.hpp"
#include "etgossip/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace etg {

struct MetricsRow {
    std::uint64_t rep = 0;
    std::uint64_t t = 0;
    std::uint64_t transmissions_cum = 0;
    double consensus_energy = 0.0;  // M_t
    double grad_norm_sq = 0.0;
    double ebar_norm = 0.0;
    double tau_t = 0.0;
    double f_avg = 0.0;

    friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct RunSummary {
    std::uint64_t rep = 0;
    std::uint64_t total_transmissions = 0;
    double final_f_avg = 0.0;        // f(x_bar_T)
    double ergodic_grad_mean = 0.0;  // (1/T) sum_t ||grad f(x_bar_t)||^2
    double final_consensus = 0.0;    // M_T
};

// Everything a run needs that depends only on the config, not on the rep.
struct ExperimentSetup {
    Graph graph;
    MixingMatrix mixing;
    std::shared_ptr<const ObjectiveSuite> objective;
    const QuadraticSuite* quadratic = nullptr;  // set when the objective is quadratic
    CommunicationPolicy policy;
    Vector x0;
    double x0_norm = 0.0;
    double eta = 0.0;
    std::vector<double> thresholds;  // tau_0 .. tau_{T-1}
    std::optional<TheoryConstants> theory;
    // Set when the objective is quadratic, the policy is event-triggered and
    // Gamma, Delta > 0 at eta.
    std::optional<double> bound_rhs;
};

ExperimentSetup build_setup(const ExperimentConfig& cfg);

struct ExperimentResult {
    std::vector<MetricsRow> rows;  // sorted by (rep, t)
    std::vector<RunSummary> runs;  // sorted by rep
    double eta = 0.0;
    std::optional<double> bound_rhs;
};

// 2 |E| T: every node messages every neighbor every round.
std::uint64_t count_full_comm(const Graph& g, std::uint64_t rounds);

// One repetition; rep r draws only from substreams keyed by (seed, r).
RunSummary run_single(const ExperimentSetup& setup, const ExperimentConfig& cfg, std::uint64_t rep,
                      std::vector<MetricsRow>* rows = nullptr);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct MetricStats {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single rep
};

struct AggregateRow {
    std::uint64_t t = 0;
    std::size_t count = 0;
    MetricStats transmissions_cum;
    MetricStats consensus_energy;
    MetricStats grad_norm_sq;
    MetricStats ebar_norm;
    MetricStats tau_t;
    MetricStats f_avg;
};

// Per-round mean and std across reps; independent of input order.
std::vector<AggregateRow> monte_carlo_summary(std::span<const MetricsRow> rows);

MetricStats summarize(std::span<const double> values);

inline constexpr const char* kMetricsHeader = "rep,t,transmissions_cum,M_t,grad_norm_sq,ebar_norm,tau_t,f_avg";
inline constexpr const char* kSummaryHeader =
    "rep,total_transmissions,final_f_avg,ergodic_grad_mean,final_M,eta,bound_rhs";

void write_csv(std::ostream& out, std::span<const MetricsRow> rows);
// Throws Error on I/O failure.
void emit_csv(std::span<const MetricsRow> rows, const std::string& path);
// Throws Error on a malformed file.
std::vector<MetricsRow> read_csv(std::istream& in);

// Per-rep lines followed by "mean" and "std" lines.
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
void emit_summary_csv(const ExperimentResult& result, const std::string& path);

// "runs.csv" -> "runs.summary.csv"
std::string summary_path_for(const std::string& metrics_path);

}  // namespace etg
