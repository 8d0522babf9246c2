#include "fracplanar/solver.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "fracplanar/specfun.hpp"

namespace fracplanar {

namespace {

// product-trapezoidal convolution weights for order alpha:
//   b_k = ((k+1)^{a+1} - 2 k^{a+1} + (k-1)^{a+1}) / Gamma(a+2),  b_0 = 1/Gamma(a+2)
//   c_n = ((n-1)^{a+1} - n^a (n - a - 1)) / Gamma(a+2)
struct TrapWeights {
    std::vector<double> b; // b[0..N]
    std::vector<double> c; // c[1..N], c[0] unused
};

TrapWeights trap_weights(double alpha, std::size_t N) {
    const double g = std::tgamma(alpha + 2.0);
    TrapWeights w;
    w.b.resize(N + 1);
    w.c.assign(N + 1, 0.0);
    w.b[0] = 1.0 / g;
    for (std::size_t k = 1; k <= N; ++k) {
        const double kd = static_cast<double>(k);
        w.b[k] = (std::pow(kd + 1.0, alpha + 1.0) - 2.0 * std::pow(kd, alpha + 1.0) +
                  std::pow(kd - 1.0, alpha + 1.0)) /
                 g;
        w.c[k] = (std::pow(kd - 1.0, alpha + 1.0) -
                  std::pow(kd, alpha) * (kd - alpha - 1.0)) /
                 g;
    }
    return w;
}

// explicit rectangle weights, used only as a fallback predictor
std::vector<double> rect_weights(double alpha, std::size_t N) {
    const double g = std::tgamma(alpha + 1.0);
    std::vector<double> w(N);
    for (std::size_t m = 0; m < N; ++m)
        w[m] = (std::pow(static_cast<double>(m) + 1.0, alpha) -
                std::pow(static_cast<double>(m), alpha)) /
               g;
    return w;
}

Vec2 rhs(const PlanarSystem& sys, double t, Vec2 x) {
    Vec2 g = sys.A * x;
    if (sys.forcing.present()) g = g + sys.forcing(t);
    if (!sys.fnl.empty()) g = g + sys.fnl.eval(x);
    return g;
}

bool finite(Vec2 v) { return std::isfinite(v.x1) && std::isfinite(v.x2); }

constexpr double kBlowUp = 1e12;

} // namespace

Trajectory solve_pi_trapezoidal(const PlanarSystem& system, Vec2 x0,
                                const StepperConfig& cfg) {
    const PlanarSystem sys = validate(system);
    if (!(cfg.h > 0.0)) throw ValidationError("solve_pi_trapezoidal: h must be positive");
    if (!(cfg.t_end >= cfg.h))
        throw ValidationError("solve_pi_trapezoidal: t_end must be at least h");
    if (cfg.newton_max < 1 || !(cfg.newton_tol > 0.0))
        throw ValidationError("solve_pi_trapezoidal: bad Newton parameters");

    const double h = cfg.h;
    const std::size_t N = static_cast<std::size_t>(std::llround(cfg.t_end / h));
    const double al[2] = {sys.orders.alpha1(), sys.orders.alpha2()};
    const double hp[2] = {std::pow(h, al[0]), std::pow(h, al[1])};
    const TrapWeights w1 = trap_weights(al[0], N);
    const TrapWeights w2 = trap_weights(al[1], N);
    std::vector<double> rw1, rw2; // rectangle predictor weights, built on demand

    Trajectory traj;
    traj.t0 = 0.0;
    traj.h = h;
    traj.method = SolveMethod::PiTrapezoidal;
    traj.samples.resize(N + 1);
    traj.samples[0] = x0;

    std::vector<Vec2> ghist(N + 1);
    ghist[0] = rhs(sys, 0.0, x0);

    for (std::size_t n = 1; n <= N; ++n) {
        const double tn = h * static_cast<double>(n);

        // lagged part: x0 + h^a [ c_n g_0 + sum_{j=1}^{n-1} b_{n-j} g_j ]
        double s1 = w1.c[n] * ghist[0].x1;
        double s2 = w2.c[n] * ghist[0].x2;
        for (std::size_t j = 1; j < n; ++j) {
            s1 += w1.b[n - j] * ghist[j].x1;
            s2 += w2.b[n - j] * ghist[j].x2;
        }
        const double r1 = x0.x1 + hp[0] * s1;
        const double r2 = x0.x2 + hp[1] * s2;
        const double u1 = hp[0] * w1.b[0]; // implicit weights
        const double u2 = hp[1] * w2.b[0];

        auto newton = [&](Vec2 x, bool& ok) {
            ok = false;
            for (int it = 0; it < cfg.newton_max; ++it) {
                if (!finite(x) || x.norm_max() > 1e2 * kBlowUp) return x;
                const Vec2 g = rhs(sys, tn, x);
                const double F1 = x.x1 - r1 - u1 * g.x1;
                const double F2 = x.x2 - r2 - u2 * g.x2;
                if (std::max(std::abs(F1), std::abs(F2)) <=
                    cfg.newton_tol * std::max(1.0, x.norm_max())) {
                    ok = true;
                    return x;
                }
                Mat2 J = sys.A;
                if (!sys.fnl.empty()) {
                    const Mat2 Jf = sys.fnl.jacobian(x);
                    J.a11 += Jf.a11;
                    J.a12 += Jf.a12;
                    J.a21 += Jf.a21;
                    J.a22 += Jf.a22;
                }
                const double j11 = 1.0 - u1 * J.a11, j12 = -u1 * J.a12;
                const double j21 = -u2 * J.a21, j22 = 1.0 - u2 * J.a22;
                const double det = j11 * j22 - j12 * j21;
                if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) return x;
                x.x1 -= (j22 * F1 - j12 * F2) / det;
                x.x2 -= (j11 * F2 - j21 * F1) / det;
            }
            return x;
        };

        bool ok = false;
        Vec2 x = newton(traj.samples[n - 1], ok);
        if (!ok) {
            // retry from an explicit rectangle predictor
            if (rw1.empty()) {
                rw1 = rect_weights(al[0], N);
                rw2 = rect_weights(al[1], N);
            }
            double p1 = 0.0, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                p1 += rw1[n - 1 - j] * ghist[j].x1;
                p2 += rw2[n - 1 - j] * ghist[j].x2;
            }
            const Vec2 pred{x0.x1 + hp[0] * p1, x0.x2 + hp[1] * p2};
            x = newton(pred, ok);
            if (!ok)
                throw NewtonDiverged("implicit step did not converge at t = " +
                                     std::to_string(tn));
        }
        if (!finite(x) || x.norm_max() > kBlowUp)
            throw Overflow("state magnitude exceeded 1e12 at t = " + std::to_string(tn) +
                           " (finite-time blow-up)");
        traj.samples[n] = x;
        ghist[n] = rhs(sys, tn, x);
    }
    return traj;
}

namespace {

// homogeneous part of the variation-of-constants formula on the grid
std::vector<Vec2> voc_R_part(const SpecFunCache& cache, const Mat2& A, Vec2 x0, double h,
                             std::size_t n) {
    std::vector<Vec2> out(n + 1);
    out[0] = x0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = h * static_cast<double>(k);
        const double r0 = cache.R(RIndex::Zero, t);
        const double ra1 = cache.R(RIndex::Alpha1, t);
        const double ra2 = cache.R(RIndex::Alpha2, t);
        out[k] = {(r0 - A.a22 * ra2) * x0.x1 + A.a12 * ra1 * x0.x2,
                  A.a21 * ra2 * x0.x1 + (r0 - A.a11 * ra1) * x0.x2};
    }
    return out;
}

double weighted_distance(const std::vector<Vec2>& u, const std::vector<Vec2>& v, double h,
                         double nu) {
    double d = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double t = h * static_cast<double>(j);
        const double w = t <= 1.0 ? 1.0 : std::pow(t, nu);
        d = std::max(d, w * (u[j] - v[j]).norm_max());
    }
    return d;
}

} // namespace

Trajectory solve_nonlinear_picard(const PlanarSystem& system, Vec2 x0, double h,
                                  double t_end, const PicardOptions& options,
                                  std::string* warning) {
    const PlanarSystem sys = validate(system);
    if (sys.forcing.present())
        throw ValidationError(
            "solve_nonlinear_picard expects an unforced system (nonlinearity only)");
    if (!(h > 0.0) || !(t_end >= h))
        throw ValidationError("solve_nonlinear_picard requires h > 0 and t_end >= h");
    if (options.max_iter < 1)
        throw ValidationError("solve_nonlinear_picard: max_iter must be at least 1");
    if (warning) warning->clear();
    if (warning && options.basin_delta && !(x0.norm_max() < *options.basin_delta))
        *warning = "||x0|| = " + std::to_string(x0.norm_max()) +
                   " is not inside the estimated basin radius delta = " +
                   std::to_string(*options.basin_delta);

    const std::size_t n = static_cast<std::size_t>(std::llround(t_end / h));
    const CharTriple triple = char_coeffs(sys);
    const SpecFunCache cache(triple, sys.orders, static_cast<double>(n) * h);
    const Mat2& A = sys.A;
    const double nu = sys.orders.nu();

    // convolution weights are fixed across iterations; only f changes
    auto w_c1 = kernel_weights(cache, SIndex::Alpha1, h, n);
    auto w_c2 = kernel_weights(cache, SIndex::Alpha2, h, n);
    const auto w_sl = kernel_weights(cache, SIndex::L, h, n);
    w_c1.axpy(-A.a22, w_sl);
    w_c2.axpy(-A.a11, w_sl);
    const std::vector<Vec2> rpart = voc_R_part(cache, A, x0, h, n);

    std::vector<Vec2> xi(n + 1, x0); // xi_0 is the constant trajectory
    double prev_d = std::numeric_limits<double>::infinity();
    int non_decreasing = 0;
    for (int iter = 0; iter < options.max_iter; ++iter) {
        std::vector<double> F1(n + 1, 0.0), F2(n + 1, 0.0);
        if (!sys.fnl.empty()) {
            for (std::size_t j = 0; j <= n; ++j) {
                const Vec2 f = sys.fnl.eval(xi[j]);
                F1[j] = f.x1;
                F2[j] = f.x2;
            }
        }
        const auto c11 = convolve_weights(w_c1, F1); // (S^{a1} - a22 S^l) * f1
        const auto cl1 = convolve_weights(w_sl, F1); //  S^l * f1
        const auto cl2 = convolve_weights(w_sl, F2); //  S^l * f2
        const auto c22 = convolve_weights(w_c2, F2); // (S^{a2} - a11 S^l) * f2

        std::vector<Vec2> next(n + 1);
        next[0] = x0;
        for (std::size_t j = 1; j <= n; ++j) {
            next[j] = {rpart[j].x1 + c11[j] + A.a12 * cl2[j],
                       rpart[j].x2 + A.a21 * cl1[j] + c22[j]};
            if (!finite(next[j]) || next[j].norm_max() > kBlowUp)
                throw Overflow("picard iterate exceeded 1e12 at t = " +
                               std::to_string(h * static_cast<double>(j)));
        }

        const double d = weighted_distance(next, xi, h, nu);
        xi.swap(next);
        if (d < options.tol) break;
        if (d >= prev_d) {
            if (++non_decreasing >= 3)
                throw NotContractive(
                    "picard iterate distance failed to decrease over three consecutive "
                    "iterations (last distance " + std::to_string(d) + ")");
        } else {
            non_decreasing = 0;
        }
        prev_d = d;
    }

    Trajectory traj;
    traj.t0 = 0.0;
    traj.h = h;
    traj.method = SolveMethod::Picard;
    traj.samples = std::move(xi);
    return traj;
}

} // namespace fracplanar
