#pragma once

#include <string>

#include "fracplanar/specfun.hpp"
#include "fracplanar/system.hpp"
#include "fracplanar/types.hpp"

namespace fracplanar {

enum class DecayVerdict { DecayConfirmed, BoundedNoDecay, Unbounded };
std::string to_string(DecayVerdict);

struct DecayReport {
    double fitted_mu = 0.0; // magnitude of the log-log slope of ||x(t)||
    double tail_sup = 0.0;  // sup over the window of t^nu ||x(t)||
    double window_lo = 0.0;
    double window_hi = 0.0;
    DecayVerdict verdict = DecayVerdict::BoundedNoDecay;
};

// Least-squares fit of log ||x(t)|| against log t over [window_lo, window_hi].
// DecayConfirmed when the fitted rate is within 0.15 of nu_expected and the
// scaled tail stays finite; BoundedNoDecay when the trajectory is bounded but
// essentially flat; Unbounded when any sample passed the blow-up threshold.
DecayReport decay_exponent(const Trajectory&, double nu_expected, double window_lo,
                           double window_hi);

// max{ sup_{t in [0,1]} ||x(t)||, sup_{t >= 1} t^nu ||x(t)|| } over the samples
double weighted_norm(const Trajectory&, double nu);

// Mittag-Leffler stability surrogate: weighted_norm within the given bound
bool ml_stability_check(const Trajectory&, double nu, double m_bound);

struct BasinReport {
    double delta = 0.0;    // basin-of-attraction radius estimate
    double epsilon = 0.0;  // target ball radius actually used (after halving)
    double r0 = 0.0;       // contraction factor at that epsilon
    double C = 0.0;        // empirical kernel-decay constant
    double M_alpha1 = 0.0;
    double M_alpha2 = 0.0;
    double M_l = 0.0;
    double denominator = 0.0; // weighted-norm combination of the R kernels
};

// delta = epsilon (1 - r0) / (2||R^0||_w + (|a11|+|a12|) ||R^{alpha1}||_w +
// (|a21|+|a22|) ||R^{alpha2}||_w), with epsilon halved until the contraction
// factor r0 drops below 1 (NoContractiveRadius if epsilon underflows 1e-8).
BasinReport basin_estimate_detail(const PlanarSystem&, double epsilon,
                                  double t_max = 128.0);
double basin_estimate(const PlanarSystem&, double epsilon);

// weighted sup norm of one R kernel from cache samples:
// max{ sup_{(0,1]} |R|, sup_{[1, t_max]} t^nu |R| }
double kernel_weighted_norm(const SpecFunCache&, RIndex);

} // namespace fracplanar
