#include "fracplanar/analysis.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace fracplanar {

std::string to_string(DecayVerdict v) {
    switch (v) {
        case DecayVerdict::DecayConfirmed: return "DecayConfirmed";
        case DecayVerdict::BoundedNoDecay: return "BoundedNoDecay";
        case DecayVerdict::Unbounded: return "Unbounded";
    }
    return "?";
}

namespace {

constexpr double kBlowUp = 1e12;

} // namespace

DecayReport decay_exponent(const Trajectory& traj, double nu_expected, double window_lo,
                           double window_hi) {
    if (!(window_lo >= 1.0) || !(window_hi > window_lo))
        throw ValidationError("decay window must satisfy 1 <= t_lo < t_hi");
    if (traj.samples.empty() || !(traj.h > 0.0))
        throw ValidationError("decay_exponent needs a sampled trajectory");

    DecayReport rep;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;

    bool blew_up = false;
    for (const Vec2& x : traj.samples)
        if (!std::isfinite(x.x1) || !std::isfinite(x.x2) || x.norm_max() > kBlowUp)
            blew_up = true;
    if (blew_up) {
        rep.verdict = DecayVerdict::Unbounded;
        rep.tail_sup = std::numeric_limits<double>::infinity();
        return rep;
    }

    // least squares of log||x|| vs log t on the window, skipping exact zeros
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.t(k);
        if (t < window_lo || t > window_hi) continue;
        const double norm = traj.samples[k].norm_max();
        rep.tail_sup = std::max(rep.tail_sup, std::pow(t, nu_expected) * norm);
        if (norm <= 0.0) continue;
        const double lx = std::log(t), ly = std::log(norm);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 20)
        throw WindowTooShort("decay window holds " + std::to_string(m) +
                             " usable samples; need at least 20");
    const double md = static_cast<double>(m);
    const double slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
    rep.fitted_mu = -slope;

    if (std::abs(rep.fitted_mu - nu_expected) <= 0.15)
        rep.verdict = DecayVerdict::DecayConfirmed;
    else
        rep.verdict = DecayVerdict::BoundedNoDecay;
    return rep;
}

double weighted_norm(const Trajectory& traj, double nu) {
    if (traj.samples.empty()) return 0.0;
    if (traj.t0 != 0.0)
        throw ValidationError("weighted_norm expects a trajectory starting at t = 0");
    double norm = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.t(k);
        const double w = t <= 1.0 ? 1.0 : std::pow(t, nu);
        norm = std::max(norm, w * traj.samples[k].norm_max());
    }
    return norm;
}

bool ml_stability_check(const Trajectory& traj, double nu, double m_bound) {
    return weighted_norm(traj, nu) <= m_bound;
}

double kernel_weighted_norm(const SpecFunCache& cache, RIndex k) {
    const double nu = cache.orders().nu();
    // |R| is continuous up to t = 0 (limit 1 for R^0, 0 otherwise), so a fine
    // log grid over the cache range suffices for the two suprema
    const int n = 4096;
    const double lo = cache.tau_min(), hi = cache.t_max();
    double sup = k == RIndex::Zero ? 1.0 : 0.0; // t -> 0+ limit on [0,1]
    for (int i = 0; i <= n; ++i) {
        const double t = lo * std::pow(hi / lo, static_cast<double>(i) / n);
        const double w = t <= 1.0 ? 1.0 : std::pow(t, nu);
        sup = std::max(sup, w * std::abs(cache.R(k, t)));
    }
    return sup;
}

BasinReport basin_estimate_detail(const PlanarSystem& system, double epsilon, double t_max) {
    const PlanarSystem sys = validate(system);
    if (sys.forcing.present())
        throw ValidationError("basin_estimate applies to unforced systems");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ValidationError("basin_estimate: epsilon must be positive and finite");
    const double nu = sys.orders.nu();
    if (!(nu < 1.0)) throw ValidationError("basin_estimate requires alpha1 < 1");

    const CharTriple triple = char_coeffs(sys);
    const SpecFunCache cache(triple, sys.orders, t_max);

    BasinReport rep;
    rep.M_alpha1 = compute_M_beta(cache, SIndex::Alpha1, t_max);
    rep.M_alpha2 = compute_M_beta(cache, SIndex::Alpha2, t_max);
    rep.M_l = compute_M_beta(cache, SIndex::L, t_max);

    // empirical stand-in for the kernel-decay constant: dyadic suprema of
    // t^{nu+1}|S| (large t) and t^{1-beta}|S| (small t), with a 1.5 margin
    double c_raw = 0.0;
    for (SIndex k : {SIndex::Alpha1, SIndex::Alpha2, SIndex::L}) {
        const double beta = index_exponent(k, sys.orders);
        for (double t = 1.0; t <= t_max * (1.0 + 1e-12); t *= 2.0)
            c_raw = std::max(c_raw, std::pow(t, nu + 1.0) * std::abs(cache.S(k, t)));
        for (double t = 0.5; t >= std::pow(2.0, -10); t *= 0.5)
            c_raw = std::max(c_raw, std::pow(t, 1.0 - beta) * std::abs(cache.S(k, t)));
    }
    rep.C = 1.5 * c_raw;

    const Mat2& A = sys.A;
    const double abs_a_sum =
        std::abs(A.a11) + std::abs(A.a12) + std::abs(A.a21) + std::abs(A.a22);
    const double factor = 2.0 * rep.C / nu + rep.M_alpha1 + rep.M_alpha2 +
                          abs_a_sum * (rep.M_l + rep.C / nu);

    rep.denominator = 2.0 * kernel_weighted_norm(cache, RIndex::Zero) +
                      (std::abs(A.a11) + std::abs(A.a12)) *
                          kernel_weighted_norm(cache, RIndex::Alpha1) +
                      (std::abs(A.a21) + std::abs(A.a22)) *
                          kernel_weighted_norm(cache, RIndex::Alpha2);

    double eps = epsilon;
    for (;;) {
        const double r0 = factor * sys.fnl.lipschitz_bound(eps);
        if (r0 < 1.0) {
            rep.epsilon = eps;
            rep.r0 = r0;
            rep.delta = eps * (1.0 - r0) / rep.denominator;
            return rep;
        }
        eps *= 0.5;
        if (eps < 1e-8)
            throw NoContractiveRadius(
                "no epsilon above 1e-8 makes the fixed-point operator contractive");
    }
}

double basin_estimate(const PlanarSystem& system, double epsilon) {
    return basin_estimate_detail(system, epsilon).delta;
}

} // namespace fracplanar
