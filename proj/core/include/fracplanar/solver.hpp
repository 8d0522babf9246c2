#pragma once

#include <optional>
#include <string>

#include "fracplanar/system.hpp"
#include "fracplanar/types.hpp"

namespace fracplanar {

struct StepperConfig {
    double h = 1.0 / 200.0;
    double newton_tol = 1e-12;
    int newton_max = 50;
    double t_end = 1.0;
};

// Implicit product-integration stepping with trapezoidal weights.  Each step
// solves the 2x2 implicit system by Newton with the analytic Jacobian of the
// polynomial right-hand side.  Throws NewtonDiverged when a step cannot be
// solved and Overflow when the state passes 1e12 (finite-time blow-up).
Trajectory solve_pi_trapezoidal(const PlanarSystem&, Vec2 x0, const StepperConfig&);

struct PicardOptions {
    int max_iter = 64;
    double tol = 1e-8;                 // weighted-norm distance between iterates
    std::optional<double> basin_delta; // warn when ||x0|| is not below this
};

// Fixed-point iteration of the variation-of-constants operator for unforced
// systems (polynomial nonlinearity or none).  Starts from the constant
// trajectory x0 and stops when successive iterates are tol-close in the
// weighted norm.  Throws NotContractive when the iterate distance fails to
// decrease three times in a row.
Trajectory solve_nonlinear_picard(const PlanarSystem&, Vec2 x0, double h, double t_end,
                                  const PicardOptions& options = {},
                                  std::string* warning = nullptr);

} // namespace fracplanar
