#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fracplanar/charfun.hpp"
#include "fracplanar/detail/pchip.hpp"
#include "fracplanar/system.hpp"
#include "fracplanar/types.hpp"

namespace fracplanar {

// The kernel families of the variation-of-constants formula:
//   R^lambda = L^{-1}{ s^{l-lambda-1} / Q },  lambda in {0, alpha1, alpha2}
//   S^beta   = L^{-1}{ s^{l-beta}     / Q },  beta   in {alpha1, alpha2, l}
enum class RIndex { Zero, Alpha1, Alpha2 };
enum class SIndex { Alpha1, Alpha2, L };

std::string to_string(RIndex);
std::string to_string(SIndex);

double index_exponent(RIndex, const FracOrders&); // lambda as a number
double index_exponent(SIndex, const FracOrders&); // beta as a number

struct SpecFunKind {
    enum class Family { R, S };
    Family family = Family::R;
    RIndex r = RIndex::Zero;
    SIndex s = SIndex::Alpha1;

    static SpecFunKind make_R(RIndex k) { return {Family::R, k, SIndex::Alpha1}; }
    static SpecFunKind make_S(SIndex k) { return {Family::S, RIndex::Zero, k}; }
    std::string index_label() const;
};

// Hankel contour gamma(mu, theta): circular arc |s| = mu spanning |arg s| <=
// theta plus two rays at arg s = +-theta truncated at r_max.
struct ContourSpec {
    double mu = 0.0;
    double theta = 0.0;
    double r_max = 0.0;
    int nodes_per_unit = 16; // Gauss-Legendre points per geometric ray panel
};

struct KernelValues {
    double r0 = 0.0, r_alpha1 = 0.0, r_alpha2 = 0.0;
    double s_alpha1 = 0.0, s_alpha2 = 0.0, s_l = 0.0;

    double get(RIndex k) const {
        return k == RIndex::Zero ? r0 : (k == RIndex::Alpha1 ? r_alpha1 : r_alpha2);
    }
    double get(SIndex k) const {
        return k == SIndex::Alpha1 ? s_alpha1 : (k == SIndex::Alpha2 ? s_alpha2 : s_l);
    }
};

// Inverse-Laplace evaluator for all six kernels of one (triple, orders) pair.
// Construction verifies that Q is zero-free in the closed right half-plane
// (throws ContourInvalid otherwise) and selects the ray angle pi/2 + delta by
// probing |Q| along the candidate ray.
//
// Stability only keeps Q clean on the closed right half-plane; zeros may
// still sit between the imaginary axis and the ray at pi/2 + delta.  Those
// are located once at construction (argument principle over the sector, then
// Newton), and every zero the Bromwich-to-contour deformation crosses is
// restored in eval_all as an explicit residue.
class LaplaceKernels {
public:
    LaplaceKernels(const CharTriple& triple, const FracOrders& orders);

    // all six kernels at once (they share contour nodes and Q evaluations)
    KernelValues eval_all(double t) const;
    double eval_R(RIndex k, double t) const { return eval_all(t).get(k); }
    double eval_S(SIndex k, double t) const { return eval_all(t).get(k); }

    ContourSpec contour_for(double t) const;
    double delta() const { return delta_; }
    double inner_eps() const { return eps_; }
    double outer_R() const { return R_; }
    const CharTriple& triple() const { return triple_; }
    const FracOrders& orders() const { return orders_; }

    // upper-half-plane zeros of Q with arg s in (pi/2, pi/2 + 0.36]
    const std::vector<std::complex<double>>& sector_poles() const { return poles_; }

private:
    std::array<std::complex<double>, 6> quadrature(double t, const ContourSpec& cs,
                                                   int arc_nodes, int ray_nodes,
                                                   double panel_ratio,
                                                   std::array<double, 6>& l1) const;

    CharTriple triple_;
    FracOrders orders_;
    double delta_ = 0.0;
    double eps_ = 0.0;
    double R_ = 0.0;
    std::vector<std::complex<double>> poles_;    // Im > 0 representatives
    std::vector<std::complex<double>> dq_poles_; // Q'(s) at each pole
    std::vector<double> pole_radii_;             // |s|, descending
};

// one-shot conveniences (each call re-runs the contour-validity gate)
double eval_R(const CharTriple&, const FracOrders&, RIndex, double t);
double eval_S(const CharTriple&, const FracOrders&, SIndex, double t);

// Sampled kernels on a logarithmic grid with shape-preserving interpolation,
// for the many evaluations needed by convolutions and solvers.  Below the
// smallest grid point the kernels follow their origin series, whose three
// leading terms are known in closed form from the characteristic triple:
//   R^lambda = t^lambda/G(lambda+1) + a t^{lambda+a1}/G(lambda+a1+1) + ...
//   S^beta   = t^{beta-1} [1/G(beta) + a t^{a1}/G(beta+a1) + b t^{a2}/G(beta+a2)]
// (G = Gamma), leaving an O(t^{2 alpha1}) relative remainder.  Thread-safe
// for concurrent reads once constructed.
class SpecFunCache {
public:
    SpecFunCache(const CharTriple& triple, const FracOrders& orders, double t_max,
                 int nodes = 2048);

    double R(RIndex, double t) const; // t in [0, t_max]
    double S(SIndex, double t) const; // t in (0, t_max]

    double t_max() const { return t_max_; }
    double tau_min() const { return tau_min_; }
    const LaplaceKernels& kernels() const { return kernels_; }
    const FracOrders& orders() const { return kernels_.orders(); }

    // coefficients {k0, k1, k2} of S = t^{beta-1}(k0 + k1 t^{a1} + k2 t^{a2})
    // at the origin; k0 = 1/Gamma(beta) is the singular coefficient
    std::array<double, 3> origin_series(SIndex) const;
    double singular_coefficient(SIndex k) const { return origin_series(k)[0]; }

private:
    LaplaceKernels kernels_;
    double t_max_ = 0.0;
    double tau_min_ = 0.0;
    std::array<double, 3> lambda_{};                // exponents for RIndex order
    std::array<double, 3> beta_{};                  // exponents for SIndex order
    std::array<std::array<double, 3>, 3> r_head_{}; // origin series per RIndex
    std::array<std::array<double, 3>, 3> s_head_{}; // origin series per SIndex
    std::array<detail::Pchip, 3> r_tab_;            // R value vs ln t
    std::array<detail::Pchip, 3> s_tab_;            // S * t^{1-beta} vs ln t
};

// Product-integration weights for one kernel on a uniform grid of step h:
//   w0[j] = int_{jh}^{(j+1)h} S(tau) dtau
//   w1[j] = int_{jh}^{(j+1)h} S(tau) (tau - jh)/h dtau
// computed from the cache (exact power law below tau_min, Gauss panels in
// tau^beta above), so the only convolution error left is the piecewise-linear
// interpolation of the other factor.  Weights of kernel combinations combine
// linearly via axpy.
struct ConvWeights {
    std::vector<double> w0, w1;

    std::size_t panels() const { return w0.size(); }
    ConvWeights& axpy(double c, const ConvWeights& other); // this += c * other
};

ConvWeights kernel_weights(const SpecFunCache&, SIndex, double h, std::size_t panels);

// out[k] = (S * f)(k h) for k = 0..f.size()-1 with f piecewise linear on the
// grid; needs weights for at least f.size()-1 panels
std::vector<double> convolve_weights(const ConvWeights&, const std::vector<double>& f);

// (S^beta * f)(k h) for k = 0..steps.  The callable form verifies one h/2
// refinement level (QuadratureNotConverged beyond 1e-3 relative); the
// sampled form performs no check.
std::vector<double> convolve_S(const SpecFunCache&, SIndex,
                               const std::function<double(double)>& f, double h,
                               std::size_t steps);
std::vector<double> convolve_S_samples(const SpecFunCache&, SIndex,
                                       const std::vector<double>& f, double h);

// exact solution of the linear system on a uniform grid via the
// variation-of-constants formula (method tag voc); requires an
// asymptotically stable linear system
Trajectory linear_voc_solution(const PlanarSystem&, Vec2 x0, double h, double t_end);

// sup over dyadic t in [1, t_max] of t^nu Int_0^t |S^beta(t-s)| s^{-nu} ds
double compute_M_beta(const SpecFunCache&, SIndex, double t_max);
double compute_M_beta(const CharTriple&, const FracOrders&, SIndex, double t_max);

} // namespace fracplanar
