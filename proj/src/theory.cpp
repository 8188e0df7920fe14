#include "etgossip/theory.hpp"

#include "etgossip/common.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace etg {

namespace {

double spectral_gap_sq(double delta) {
    const double gap = 1.0 - std::sqrt(delta);
    return gap * gap;
}

StabilityConstants stability_at(const TheoryConstants& c, double eta) {
    const double n = static_cast<double>(c.n);
    const double ratio = 27.0 * n * eta * eta * c.lipschitz * c.lipschitz / spectral_gap_sq(c.delta);
    StabilityConstants s;
    s.gamma = 1.0 - ratio;
    s.delta_cap = 0.5 - ratio / s.gamma;
    return s;
}

void require_applicable(const StabilityConstants& s) {
    if (!s.applicable()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "bound inapplicable: Gamma = " << s.gamma << ", Delta = " << s.delta_cap;
        throw AssumptionViolation(msg.str());
    }
}

double mean_square(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const double sum = std::accumulate(values.begin(), values.end(), 0.0,
                                       [](double acc, double v) { return acc + v * v; });
    return sum / static_cast<double>(values.size());
}

}  // namespace

StabilityConstants stability_constants(const TheoryConstants& c) {
    return stability_at(c, c.eta);
}

double eta_max(double lipschitz, double delta, std::size_t n) {
    const double network = (1.0 - std::sqrt(delta)) / (9.0 * std::sqrt(static_cast<double>(n)) * lipschitz);
    return std::min(1.0 / lipschitz, network);
}

double ergodic_bound_rhs(const TheoryConstants& c, std::span<const double> thresholds) {
    if (thresholds.empty()) throw std::invalid_argument("ergodic bound needs T >= 1 thresholds");
    const auto s = stability_constants(c);
    require_applicable(s);

    const double n = static_cast<double>(c.n);
    const double T = static_cast<double>(thresholds.size());
    const double eta = c.eta;
    const double l2 = c.lipschitz * c.lipschitz;
    const double gap_sq = spectral_gap_sq(c.delta);
    const double gd = s.gamma * s.delta_cap;
    const double tau_sq = mean_square(thresholds);

    const double transient = c.f0_gap / (eta * s.delta_cap * T);
    const double consensus = eta * l2 / gd *
                             (3.0 * n * n * c.alpha * c.alpha / (1.0 - c.delta) +
                              27.0 * eta * eta * n * c.beta * c.beta / gap_sq);
    const double noise = eta * c.alpha * c.alpha / (n * s.delta_cap);
    const double trigger_consensus = 9.0 * eta * l2 / (gap_sq * gd) * n * tau_sq;
    const double trigger_average = tau_sq / (eta * s.delta_cap);
    return transient + consensus + noise + trigger_consensus + trigger_average;
}

CaseCoefficients case_coefficients(StepsizeCase which, const TheoryConstants& c,
                                   std::span<const double> thresholds, double cap) {
    if (thresholds.empty()) throw std::invalid_argument("case stepsize needs T >= 1");
    CaseCoefficients k;
    k.cap = cap > 0.0 ? cap : eta_max(c.lipschitz, c.delta, c.n) / 2.0;
    const auto s = stability_at(c, k.cap);
    require_applicable(s);
    k.gamma = s.gamma;
    k.delta_cap = s.delta_cap;

    const double n = static_cast<double>(c.n);
    const double T = static_cast<double>(thresholds.size());
    const double l2 = c.lipschitz * c.lipschitz;
    const double a2 = c.alpha * c.alpha;
    const double gap_sq = spectral_gap_sq(c.delta);
    const double gd = s.gamma * s.delta_cap;
    const double noise_terms = a2 / (n * s.delta_cap) + l2 / gd * (3.0 * n * n * a2 / (1.0 - c.delta));
    const double hetero = 27.0 * l2 * n * c.beta * c.beta / (gap_sq * gd);
    const double cap_sq = k.cap * k.cap;

    k.k1 = c.f0_gap / s.delta_cap;
    switch (which) {
        case StepsizeCase::A:
            k.k2 = noise_terms;
            k.k3 = hetero;
            k.linear = k.k2 + k.k3 * cap_sq;
            k.inverse = 0.0;
            break;
        case StepsizeCase::B: {
            const double tau = thresholds[0];
            k.k2 = noise_terms + 9.0 * l2 * n * tau * tau / (gap_sq * gd);
            k.k3 = tau * tau / s.delta_cap;
            k.k4 = hetero;
            k.linear = k.k2 + k.k4 * cap_sq;
            k.inverse = k.k3;
            break;
        }
        case StepsizeCase::C: {
            const double tau_sq = mean_square(thresholds);
            k.k2 = noise_terms;
            k.k3 = hetero;
            k.k4 = 9.0 * l2 * n / (gap_sq * gd);
            k.linear = k.k2 + k.k3 * cap_sq + k.k4 * tau_sq;
            k.inverse = tau_sq / s.delta_cap;
            break;
        }
    }
    const double numerator = k.k1 / T + k.inverse;
    k.eta = k.linear > 0.0 ? std::min(std::sqrt(numerator / k.linear), k.cap) : k.cap;
    return k;
}

std::vector<double> threshold_sequence(const ThresholdSchedule& schedule, std::size_t rounds,
                                       double x0_norm) {
    std::vector<double> taus(rounds);
    for (std::size_t t = 0; t < rounds; ++t) taus[t] = threshold_at(schedule, t, x0_norm);
    return taus;
}

double case_stepsize(StepsizeCase which, const TheoryConstants& c, std::size_t rounds,
                     const ThresholdSchedule& schedule, double x0_norm, double cap) {
    const auto taus = threshold_sequence(schedule, rounds, x0_norm);
    return case_coefficients(which, c, taus, cap).eta;
}

}  // namespace etg
