#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracplanar/charfun.hpp"
#include "fracplanar/system.hpp"

namespace fracplanar {

// Tags of the sufficient stability criteria, named after their inequality set.
enum class CriterionTag { L3_2, L3_3, L3_4, L3_5i, L3_5ii, L3_6i, L3_6ii };

std::string to_string(CriterionTag tag);

// Outcome of the purely-imaginary-zero analysis.  The reduced quadratic in
// X = omega^{alpha2} is a rho1 X^2 + [ab - c(rho2^2-rho1^2)] X + b c rho1 = 0;
// its discriminant factors as (ab - c(rho1+rho2)^2)(ab - c(rho2-rho1)^2).
struct ImaginaryZeroReport {
    bool zero_free = false;
    double discriminant = 0.0;
    std::vector<double> roots_X;          // real roots of the reduced equation
    std::vector<double> scan_roots_omega; // h2 roots where the h1 equation also holds
    // verdict of the explicit zero-free conditions when a,b,c > 0 (unset otherwise)
    std::optional<bool> corollary_zero_free;
};

// Scan h2 for roots and test the imaginary-zero equation pair at each one;
// when a,b > 0 also evaluate the explicit discriminant conditions.
// Requires c > 0 and alpha1 < alpha2.
ImaginaryZeroReport imaginary_zero_test(const CharTriple& triple, const FracOrders& orders);

// Every criterion whose hypothesis holds exactly as stated (no epsilon slack).
// Near-equality of any strict/weak inequality within 1e-12 relative is noted
// as "criterion boundary" in *notes when provided.
std::vector<CriterionTag> sufficient_criteria(const CharTriple& triple, const FracOrders& orders,
                                              std::vector<std::string>* notes = nullptr);

struct WindingOptions {
    int initial_per_piece = 256;     // initial samples per contour piece
    std::size_t budget = 10'000'000; // max Q evaluations before BudgetExhausted
};

struct WindingResult {
    int zeros = 0;            // nearest integer to total_arg / 2 pi
    double residual = 0.0;    // |total_arg / 2 pi - zeros|
    double min_rel_q = 0.0;   // min sampled |Q| / scale over the contour
    std::size_t samples = 0;  // Q evaluations used
    double inner_eps = 0.0;
    double outer_R = 0.0;
};

// Zeros of Q in the closed right half-plane between |s| = eps and |s| = R,
// counted by accumulating arg Q along the oriented boundary contour.
WindingResult winding_count_detail(const CharTriple& triple, const FracOrders& orders,
                                   const WindingOptions& opts = {});
int winding_count(const CharTriple& triple, const FracOrders& orders,
                  const WindingOptions& opts = {});

// Same count computed from the upper half of the contour only, doubled by
// conjugate symmetry; exposed for the symmetry property test.
int winding_count_half(const CharTriple& triple, const FracOrders& orders,
                       const WindingOptions& opts = {});

enum class Stability { AsymptoticallyStable, NotAsymptoticallyStable, Inconclusive };

std::string to_string(Stability s);

struct StabilityVerdict {
    Stability status = Stability::Inconclusive;
    std::vector<CriterionTag> criteria_hit;
    std::optional<int> winding_count;
    std::optional<bool> imaginary_zero_free;
    std::string diagnostics;
};

// Decision order: c <= 0 -> not stable; any sufficient criterion -> stable;
// zero-free axis and winding 0 -> stable; winding >= 1 -> not stable;
// otherwise inconclusive (winding failures recorded in diagnostics).
StabilityVerdict stability_verdict(const PlanarSystem& system);

} // namespace fracplanar
