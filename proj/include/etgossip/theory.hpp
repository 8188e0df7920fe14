#pragma once

#include "etgossip/policy.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace etg {

// Problem and run constants entering the ergodic convergence bound.
struct TheoryConstants {
    std::size_t n = 0;
    double lipschitz = 0.0;  // L
    double alpha = 0.0;      // gradient noise bound
    double beta = 0.0;       // heterogeneity bound
    double delta = 0.0;      // spectral contraction factor
    double eta = 0.0;
    double f0_gap = 0.0;     // f(x_bar_0) - f*
};

struct StabilityConstants {
    double gamma = 0.0;      // 1 - 27 n eta^2 L^2 / (1 - sqrt(delta))^2
    double delta_cap = 0.0;  // 1/2 - 27 n eta^2 L^2 / ((1 - sqrt(delta))^2 Gamma)

    bool applicable() const noexcept { return gamma > 0.0 && delta_cap > 0.0; }
};

// Never throws; check applicable().
StabilityConstants stability_constants(const TheoryConstants& c);

// min{1/L, (1 - sqrt(delta)) / (9 sqrt(n) L)}. Gamma > 2/3 and Delta > 0
// hold for every eta strictly below this value.
double eta_max(double lipschitz, double delta, std::size_t n);

// Right-hand side of the ergodic bound on (1/T) sum_t E||grad f(x_bar_t)||^2
// for thresholds tau_0..tau_{T-1}. Throws AssumptionViolation when Gamma or
// Delta is not positive, std::invalid_argument for an empty sequence.
double ergodic_bound_rhs(const TheoryConstants& c, std::span<const double> thresholds);

enum class StepsizeCase { A, B, C };

// Coefficients of the reduced bound K1/(eta T) + a eta + b/eta used to pick
// the prescribed stepsize. Gamma and Delta are evaluated at `cap`; since both
// decrease in eta, the coefficients upper-bound those of any eta <= cap.
struct CaseCoefficients {
    double cap = 0.0;
    double gamma = 0.0;
    double delta_cap = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
    double linear = 0.0;   // K~2 (cases A, B) or a~_T (case C)
    double inverse = 0.0;  // 0 (case A), K3 (case B), b_T (case C)
    double eta = 0.0;
};

// Case A: tau = 0. Case B: constant tau = thresholds[0]. Case C: the given
// sequence, through its mean square. `cap` defaults to eta_max / 2.
CaseCoefficients case_coefficients(StepsizeCase which, const TheoryConstants& c,
                                   std::span<const double> thresholds, double cap = 0.0);

double case_stepsize(StepsizeCase which, const TheoryConstants& c, std::size_t rounds,
                     const ThresholdSchedule& schedule, double x0_norm, double cap = 0.0);

std::vector<double> threshold_sequence(const ThresholdSchedule& schedule, std::size_t rounds,
                                       double x0_norm);

}  // namespace etg
