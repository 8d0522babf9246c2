#pragma once

#include <complex>

#include "fracplanar/types.hpp"

namespace fracplanar {

// s^p on the principal branch, cut along the negative real axis with
// arg s in (-pi, pi]; s = 0 maps to 0 for p > 0 and to 1 for p = 0.
std::complex<double> principal_pow(std::complex<double> s, double p);

struct TrigConsts {
    double rho1 = 0.0; // sin(a1 pi/2) / sin((a2-a1) pi/2)
    double rho2 = 0.0; // sin(a2 pi/2) / sin((a2-a1) pi/2)
    double q1 = 0.0;   // sin(a1 pi/2) / sin((a1+a2) pi/2)
    double q2 = 0.0;   // sin(a2 pi/2) / sin((a1+a2) pi/2)
};

// Requires alpha1 < alpha2 (throws DegenerateOrders otherwise).
TrigConsts trig_consts(const FracOrders& orders);

// Q(s) = s^{a1+a2} - a s^{a2} - b s^{a1} + c with principal-branch powers.
std::complex<double> eval_Q(const CharTriple& triple, const FracOrders& orders,
                            std::complex<double> s);

// |s|^{a1+a2} + |a||s|^{a2} + |b||s|^{a1} + |c|: the natural magnitude scale
// of Q at |s|, used for relative near-zero detection.
double q_scale(const CharTriple& triple, const FracOrders& orders, double abs_s);

struct BoundaryTrace {
    double h1 = 0.0; // Re Q(i omega)
    double h2 = 0.0; // Im Q(i omega)
};

// Closed-form real/imaginary parts of Q on the positive imaginary axis.
BoundaryTrace boundary_trace(const CharTriple& triple, const FracOrders& orders, double omega);

// Smallest R >= 1 with R^{a1+a2} >= 2(|a| R^{a2} + |b| R^{a1} + |c|); then
// |Q(s)| >= |s|^{a1+a2}/2 for |s| >= R by the triangle inequality.
double outer_radius(const CharTriple& triple, const FracOrders& orders);

// eps > 0 with eps^{a1+a2} + |a| eps^{a2} + |b| eps^{a1} <= c/2, so that
// |Q(s)| >= c/2 on |s| <= eps.  Requires c > 0 (NonpositiveC otherwise).
double inner_radius(const CharTriple& triple, const FracOrders& orders);

} // namespace fracplanar
