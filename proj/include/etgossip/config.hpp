#pragma once

#include "etgossip/policy.hpp"
#include "etgossip/theory.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace etg {

struct PolicyConfig {
    // full, zero, constant, sqrt_decay, linear_decay, relative,
    // event_triggered (with `schedule`), periodic, probabilistic, variable_working
    std::string kind;
    std::string schedule = "zero";
    double tau0 = 0.0;
    double epsilon = 0.0;
    std::size_t kp = 1;
    double p_link = 1.0;
    double p_k = 1.0;
};

struct ObjectiveConfig {
    std::string kind = "quadratic";  // quadratic | logistic
    double spread = 1.0;
    double alpha = 0.1;
    std::size_t samples = 50;  // logistic: samples per node
    double skew = 0.9;         // logistic: home-class fraction
    double lambda = 0.01;      // logistic: L2 regularization
    std::size_t batch = 1;     // logistic: minibatch size
};

struct ExperimentConfig {
    std::size_t n = 0;
    std::size_t d = 0;
    double sparsity = 0.0;
    std::optional<std::size_t> edge_count;
    std::uint64_t seed = 0;
    std::size_t reps = 1;
    std::size_t rounds = 0;  // key "T"
    std::optional<double> eta;
    std::optional<StepsizeCase> stepsize_case;  // key "case"
    double init_scale = 1.0;  // x0 ~ init_scale * N(0, I), shared by all nodes
    PolicyConfig policy;
    ObjectiveConfig objective;
    std::string output;
};

// Flat "key=value" lines, '#' starts a comment, dotted keys for blocks.
// Collects every problem and throws one ConfigError listing them all.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Resolves the policy block for a graph of n nodes.
CommunicationPolicy make_policy(const PolicyConfig& p, std::size_t n);

}  // namespace etg
