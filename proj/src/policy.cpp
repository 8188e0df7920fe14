#include "etgossip/policy.hpp"

#include <cmath>
#include <string>

namespace etg {

namespace {

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

}  // namespace

double threshold_at(const ThresholdSchedule& s, std::size_t t, double x0_norm) {
    const double step = static_cast<double>(t) + 1.0;
    switch (s.kind) {
        case ScheduleKind::zero: return 0.0;
        case ScheduleKind::constant: return s.tau0;
        case ScheduleKind::sqrt_decay: return s.tau0 / std::sqrt(step);
        case ScheduleKind::linear_decay: return s.tau0 / step;
        case ScheduleKind::relative: return s.epsilon * x0_norm;
    }
    return 0.0;
}

CommunicationPolicy CommunicationPolicy::event_triggered(ThresholdSchedule schedule) {
    if (schedule.tau0 < 0.0 || schedule.epsilon < 0.0) {
        throw std::invalid_argument("threshold parameters must be nonnegative");
    }
    CommunicationPolicy p;
    p.kind = PolicyKind::event_triggered;
    p.schedule = schedule;
    return p;
}

CommunicationPolicy CommunicationPolicy::periodic(std::size_t kp) {
    if (kp == 0) throw std::invalid_argument("period K_p must be at least 1");
    CommunicationPolicy p;
    p.kind = PolicyKind::periodic;
    p.period_kp = kp;
    return p;
}

CommunicationPolicy CommunicationPolicy::probabilistic(Matrix link_prob) {
    for (Eigen::Index i = 0; i < link_prob.size(); ++i) {
        require_probability(link_prob.data()[i], "link probability");
    }
    CommunicationPolicy p;
    p.kind = PolicyKind::probabilistic;
    p.link_prob = std::move(link_prob);
    return p;
}

CommunicationPolicy CommunicationPolicy::probabilistic(std::size_t n, double prob) {
    require_probability(prob, "link probability");
    const auto size = static_cast<Eigen::Index>(n);
    return probabilistic(Matrix::Constant(size, size, prob));
}

CommunicationPolicy CommunicationPolicy::variable_working(double p_k) {
    require_probability(p_k, "activation probability");
    CommunicationPolicy p;
    p.kind = PolicyKind::variable_working;
    p.activation_prob = p_k;
    return p;
}

bool event_trigger_decision(const Eigen::Ref<const Vector>& x,
                            const Eigen::Ref<const Vector>& snapshot, double tau_t) {
    if (x.size() != snapshot.size()) {
        throw DimensionError("trigger test: model has dimension " + std::to_string(x.size()) +
                             ", snapshot has " + std::to_string(snapshot.size()));
    }
    return (x - snapshot).norm() >= tau_t;
}

bool periodic_decision(std::size_t t, std::size_t kp) {
    if (kp == 0) throw std::invalid_argument("period K_p must be at least 1");
    return t % kp == 0;
}

bool probabilistic_decision(RandomStream& stream, double p_ij) {
    return stream.bernoulli(p_ij);
}

bool activation_decision(RandomStream& stream, double p_k) {
    return stream.bernoulli(p_k);
}

std::string_view to_string(ScheduleKind kind) noexcept {
    switch (kind) {
        case ScheduleKind::zero: return "zero";
        case ScheduleKind::constant: return "constant";
        case ScheduleKind::sqrt_decay: return "sqrt_decay";
        case ScheduleKind::linear_decay: return "linear_decay";
        case ScheduleKind::relative: return "relative";
    }
    return "?";
}

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::event_triggered: return "event_triggered";
        case PolicyKind::periodic: return "periodic";
        case PolicyKind::probabilistic: return "probabilistic";
        case PolicyKind::variable_working: return "variable_working";
    }
    return "?";
}

}  // namespace etg
