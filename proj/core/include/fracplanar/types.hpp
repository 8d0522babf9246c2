#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracplanar {

// All recoverable failures are reported through exceptions rooted here, so
// callers can distinguish "the math said no" from programming errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OrdersOutOfRange : Error { using Error::Error; };
struct EqualOrdersWithoutFlag : Error { using Error::Error; };
struct DegenerateOrders : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct NonlinearityViolatesLipschitzAtZero : ValidationError { using ValidationError::ValidationError; };
struct NonpositiveC : Error { using Error::Error; };
struct ZeroOnContour : Error { using Error::Error; };
struct BudgetExhausted : Error { using Error::Error; };
struct ContourInvalid : Error { using Error::Error; };
struct QuadratureNotConverged : Error { using Error::Error; };
struct NewtonDiverged : Error { using Error::Error; };
struct Overflow : Error { using Error::Error; };
struct NotContractive : Error { using Error::Error; };
struct WindowTooShort : Error { using Error::Error; };
struct NoContractiveRadius : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    double norm_max() const { return std::max(std::abs(x1), std::abs(x2)); }
};

inline Vec2 operator+(Vec2 u, Vec2 v) { return {u.x1 + v.x1, u.x2 + v.x2}; }
inline Vec2 operator-(Vec2 u, Vec2 v) { return {u.x1 - v.x1, u.x2 - v.x2}; }
inline Vec2 operator*(double k, Vec2 v) { return {k * v.x1, k * v.x2}; }

struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a21; }
    Vec2 operator*(Vec2 v) const { return {a11 * v.x1 + a12 * v.x2, a21 * v.x1 + a22 * v.x2}; }
};

// Pair of Caputo orders 0 < alpha1 <= alpha2 <= 1.  The incommensurate theory
// (criteria, winding, kernels) requires alpha1 < alpha2 strictly; equal orders
// are admitted only when explicitly requested, and only the solvers accept them.
class FracOrders {
  public:
    FracOrders(double alpha1, double alpha2, bool allow_equal = false)
        : alpha1_(alpha1), alpha2_(alpha2) {
        if (!(alpha1 > 0.0) || !(alpha2 <= 1.0) || !(alpha1 <= alpha2))
            throw OrdersOutOfRange("orders must satisfy 0 < alpha1 <= alpha2 <= 1, got (" +
                                   std::to_string(alpha1) + ", " + std::to_string(alpha2) + ")");
        if (alpha1 == alpha2 && !allow_equal)
            throw EqualOrdersWithoutFlag("equal orders alpha1 == alpha2 require the explicit opt-in flag");
    }

    double alpha1() const { return alpha1_; }
    double alpha2() const { return alpha2_; }
    // nu = min order: the decay exponent appearing in all asymptotic bounds.
    double nu() const { return alpha1_; }
    // l = alpha1 + alpha2: the leading exponent of the characteristic function.
    double l() const { return alpha1_ + alpha2_; }
    bool equal_orders() const { return alpha1_ == alpha2_; }

  private:
    double alpha1_;
    double alpha2_;
};

// Coefficients of Q(s) = s^(a1+a2) - a*s^(a2) - b*s^(a1) + c, always derived
// from the system matrix as a = A11, b = A22, c = det A.
struct CharTriple {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

enum class SolveMethod { PiTrapezoidal, VariationOfConstants, Picard };

std::string to_string(SolveMethod m);

// Uniformly sampled solution path: samples[k] approximates x(t0 + k*h).
struct Trajectory {
    double t0 = 0.0;
    double h = 0.0;
    SolveMethod method = SolveMethod::PiTrapezoidal;
    std::vector<Vec2> samples;

    std::size_t size() const { return samples.size(); }
    double t(std::size_t k) const { return t0 + static_cast<double>(k) * h; }
};

} // namespace fracplanar
