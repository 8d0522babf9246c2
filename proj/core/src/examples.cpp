#include "fracplanar/examples.hpp"

namespace fracplanar {

namespace {

// Shared quadratic nonlinearity of the even-numbered examples:
// f1(x) = x1^2 x2^2, f2(x) = x1^2 + x2^2.
Nonlinearity example_nonlinearity() {
    return Nonlinearity({{1.0, 2, 2}}, {{1.0, 2, 0}, {1.0, 0, 2}});
}

PlanarSystem make_linear(double a1, double a2, Mat2 A) {
    return {FracOrders(a1, a2), A, Forcing::paper(), Nonlinearity()};
}

PlanarSystem make_nonlinear(double a1, double a2, Mat2 A) {
    return {FracOrders(a1, a2), A, Forcing::none(), example_nonlinearity()};
}

} // namespace

ExampleSpec paper_example(ExampleId id) {
    switch (id.n) {
        case 1:
            return {make_linear(1.0 / 3.0, 0.5, {0.0, 0.25, -2.0, 1.0}), {1.0, 2.0}, {}, 1.0 / 3.0};
        case 2:
            return {make_nonlinear(1.0 / 3.0, 0.5, {0.0, 0.25, -2.0, 1.0}),
                    {0.1, -0.2},
                    Vec2{1.0, -1.0},
                    1.0 / 3.0};
        case 3:
            return {make_linear(0.6, 0.8, {1.0, 2.0, -1.0, 0.0}), {1.0, 2.0}, {}, 0.6};
        case 4:
            return {make_nonlinear(0.6, 0.8, {1.0, 2.0, -1.0, 0.0}), {0.1, -0.2}, {}, 0.6};
        case 5:
            return {make_linear(0.3, 0.4, {1.0, -1.0, 2.0, 1.0}), {1.0, 2.0}, {}, 0.3};
        case 6:
            return {make_nonlinear(0.3, 0.4, {0.1, -0.4, 0.7, 0.2}), {0.1, -0.2}, {}, 0.3};
        case 7:
            return {make_linear(0.4, 0.5, {-1.0, 2.0, -5.0, 4.0}), {1.0, 2.0}, {}, 0.4};
        case 8:
            return {make_nonlinear(0.4, 0.5, {-1.0, -2.0, 2.0, 2.0}), {0.1, -0.2}, {}, 0.4};
        default:
            throw std::out_of_range("example id must be in 1..8");
    }
}

} // namespace fracplanar
