#pragma once

#include <optional>

#include "fracplanar/system.hpp"

namespace fracplanar {

struct ExampleId {
    int n = 1; // valid range 1..8
};

// One of the eight reference systems, with its canonical initial state and
// expected decay exponent nu = alpha1.  Odd-numbered entries are linear with
// the built-in forcing pair; even-numbered ones carry the polynomial
// nonlinearity (x1^2 x2^2, x1^2 + x2^2).  Example 2 has a second, far initial
// state for which decay is expected to be absent.
struct ExampleSpec {
    PlanarSystem system;
    Vec2 x0;
    std::optional<Vec2> x0_alt;
    double nu = 0.0;
};

ExampleSpec paper_example(ExampleId id);
inline ExampleSpec paper_example(int n) { return paper_example(ExampleId{n}); }

} // namespace fracplanar
