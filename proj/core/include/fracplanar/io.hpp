#pragma once

#include <iosfwd>
#include <string>

#include "fracplanar/system.hpp"
#include "fracplanar/types.hpp"

namespace fracplanar {

// System-spec document, JSON:
//   {
//     "alpha": [a1, a2],
//     "A": [[a11, a12], [a21, a22]],
//     "forcing": "paper" | "none" | {"table": [[t, f1, f2], ...]},   (optional)
//     "nonlinearity": {"x1": [[coef, p1, p2], ...], "x2": [...]}     (optional)
//   }
// Unknown keys are rejected.  The returned system is validated.
PlanarSystem system_from_json(const std::string& text, bool allow_equal_orders = false);
PlanarSystem load_system(const std::string& path, bool allow_equal_orders = false);
std::string system_to_json(const PlanarSystem&);

// CSV with 17 significant digits; columns t,x1,x2
void write_trajectory_csv(std::ostream&, const Trajectory&);
void write_trajectory_csv(const std::string& path, const Trajectory&);

// columns t, t^nu x1, t^nu x2
void write_scaled_csv(std::ostream&, const Trajectory&, double nu);
void write_scaled_csv(const std::string& path, const Trajectory&, double nu);

// reads a t,x1,x2 CSV produced by the writers (uniform grid required)
Trajectory read_trajectory_csv(const std::string& path);

} // namespace fracplanar
