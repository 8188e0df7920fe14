#pragma once

#include "etgossip/common.hpp"
#include "etgossip/rng.hpp"

#include <cstddef>
#include <string_view>

namespace etg {

enum class ScheduleKind { zero, constant, sqrt_decay, linear_decay, relative };

// Threshold sequence tau_t for the event trigger.
//   zero:         0
//   constant:     tau0
//   sqrt_decay:   tau0 / sqrt(t + 1)
//   linear_decay: tau0 / (t + 1)
//   relative:     epsilon * ||x0||
struct ThresholdSchedule {
    ScheduleKind kind = ScheduleKind::zero;
    double tau0 = 0.0;
    double epsilon = 0.0;
};

double threshold_at(const ThresholdSchedule& s, std::size_t t, double x0_norm);

enum class PolicyKind { event_triggered, periodic, probabilistic, variable_working };

// Which scheme gates transmission each round. Only the fields of the active
// kind are read. Use the factories; they validate their arguments.
struct CommunicationPolicy {
    PolicyKind kind = PolicyKind::event_triggered;
    ThresholdSchedule schedule;
    std::size_t period_kp = 1;
    Matrix link_prob;  // link_prob(sender, receiver)
    double activation_prob = 1.0;

    static CommunicationPolicy event_triggered(ThresholdSchedule schedule);
    static CommunicationPolicy periodic(std::size_t kp);
    static CommunicationPolicy probabilistic(Matrix link_prob);
    static CommunicationPolicy probabilistic(std::size_t n, double p);
    static CommunicationPolicy variable_working(double p_k);
};

// ||x - snapshot|| >= tau_t. Inclusive: ties trigger, and tau_t = 0 always triggers.
bool event_trigger_decision(const Eigen::Ref<const Vector>& x,
                            const Eigen::Ref<const Vector>& snapshot, double tau_t);

// Communication rounds are t = 0, kp, 2kp, ...
bool periodic_decision(std::size_t t, std::size_t kp);

// One Bernoulli(p) draw for a directed link in one round.
bool probabilistic_decision(RandomStream& stream, double p_ij);

// One Bernoulli(p_k) draw deciding whether a node works in one round.
bool activation_decision(RandomStream& stream, double p_k);

std::string_view to_string(ScheduleKind kind) noexcept;
std::string_view to_string(PolicyKind kind) noexcept;

}  // namespace etg
