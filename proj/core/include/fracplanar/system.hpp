#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fracplanar/types.hpp"

namespace fracplanar {

// f_i(t) = 1 on [0,1), t^{-2i} on [1,inf); continuous at t=1 and O(t^{-2i}).
double paper_forcing(int component_index, double t);

// Time-dependent inhomogeneity f(t).  Either absent, the built-in pair above,
// or a sampled table with linear interpolation (clamped outside its range).
class Forcing {
  public:
    enum class Kind { None, Paper, Table };

    Forcing() = default;
    static Forcing none() { return Forcing(); }
    static Forcing paper();
    // rows are (t, f1, f2); times must be strictly increasing and nonempty
    static Forcing table(std::vector<std::array<double, 3>> rows);

    Kind kind() const { return kind_; }
    bool present() const { return kind_ != Kind::None; }
    Vec2 operator()(double t) const;

    const std::vector<std::array<double, 3>>& rows() const { return rows_; }

  private:
    Kind kind_ = Kind::None;
    std::vector<std::array<double, 3>> rows_;
};

// One monomial coef * x1^p1 * x2^p2 of an autonomous polynomial nonlinearity.
struct NonlinearTerm {
    double coef = 0.0;
    int p1 = 0;
    int p2 = 0;
};

// Polynomial map f(x) = (f1(x), f2(x)) with every term of total degree >= 2,
// so f(0) = 0 and the local Lipschitz bound l_f(r) vanishes as r -> 0.
class Nonlinearity {
  public:
    Nonlinearity() = default;
    Nonlinearity(std::vector<NonlinearTerm> f1, std::vector<NonlinearTerm> f2)
        : f1_(std::move(f1)), f2_(std::move(f2)) {}

    bool empty() const { return f1_.empty() && f2_.empty(); }
    const std::vector<NonlinearTerm>& component(int i) const { return i == 1 ? f1_ : f2_; }

    Vec2 eval(Vec2 x) const;
    Mat2 jacobian(Vec2 x) const;
    // max-norm Lipschitz constant of f on the ball B(0, r):
    // max_i sum_terms |coef| * (p1+p2) * r^{p1+p2-1}
    double lipschitz_bound(double r) const;

  private:
    std::vector<NonlinearTerm> f1_;
    std::vector<NonlinearTerm> f2_;
};

// ^C D^{alpha} x = A x + forcing(t)   (linear, nonautonomous), or
// ^C D^{alpha} x = A x + fnl(x)       (nonlinear, autonomous).
// At most one of forcing / fnl participates in a solve.
struct PlanarSystem {
    FracOrders orders;
    Mat2 A;
    Forcing forcing;
    Nonlinearity fnl;

    bool is_linear() const { return fnl.empty(); }
};

// Checks invariants and returns a normalized copy: duplicate (p1,p2) power
// pairs in the nonlinearity are merged, zero-coefficient terms dropped.
PlanarSystem validate(const PlanarSystem& system);

// (a, b, c) = (A11, A22, det A): coefficients of the characteristic function.
CharTriple char_coeffs(const PlanarSystem& system);

} // namespace fracplanar
