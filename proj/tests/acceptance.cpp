// Acceptance gate: one PASS/FAIL line per criterion, exit code = #failures.
// Each criterion prints the measured quantities it was judged on, so a red
// line carries its own evidence.  Stated runtime budgets are reported but not
// gated (they depend on the host).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fracplanar/analysis.hpp"
#include "fracplanar/detail/parallel.hpp"
#include "fracplanar/examples.hpp"
#include "fracplanar/solver.hpp"
#include "fracplanar/specfun.hpp"
#include "fracplanar/stability.hpp"
#include "oracles.hpp"

using namespace fracplanar;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
};

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

int g_failures = 0;

void run_criterion(int id, const std::string& title, double budget_s,
                   const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%d] %s %s (%.1f s)\n", id, out.pass ? "PASS" : "FAIL", title.c_str(), secs);
    if (budget_s > 0.0 && secs > budget_s)
        out.notes.push_back(fmt("note: runtime %.1f s exceeds the stated %.0f s budget",
                                secs, budget_s));
    for (const std::string& n : out.notes) std::printf("      %s\n", n.c_str());
    std::fflush(stdout);
    if (!out.pass) ++g_failures;
}

struct RandomCase {
    FracOrders orders;
    CharTriple triple;
    RandomCase(FracOrders o, CharTriple t) : orders(o), triple(t) {}
};

FracOrders draw_orders(std::mt19937& rng) {
    std::uniform_real_distribution<double> u1(0.10, 0.85);
    const double a1 = u1(rng);
    std::uniform_real_distribution<double> u2(a1 + 0.05, 1.0);
    return FracOrders(a1, u2(rng));
}

double max_norm(const Trajectory& tr) {
    double m = 0.0;
    for (const Vec2& v : tr.samples) m = std::max(m, v.norm_max());
    return m;
}

double max_gap(const Trajectory& u, const Trajectory& v) {
    double m = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        m = std::max(m, (u.samples[k] - v.samples[k]).norm_max());
    return m;
}

// ---- criterion 1: criteria and winding agree on the example triples -------

void criterion_examples(Outcome& out) {
    for (int n = 1; n <= 8; ++n) {
        const ExampleSpec ex = paper_example(n);
        const CharTriple triple = char_coeffs(ex.system);
        const auto tags = sufficient_criteria(triple, ex.system.orders);
        const int z = winding_count(triple, ex.system.orders);
        if (tags.empty() || z != 0) {
            out.pass = false;
            out.notes.push_back(fmt("example %d: %zu criteria hit, winding %d", n,
                                    tags.size(), z));
        }
    }
    if (out.pass)
        out.notes.push_back("all 8 example triples: criteria nonempty, winding count 0");
}

// ---- criterion 2: random criteria-satisfying triples have no RHP zeros ----

void criterion_soundness(Outcome& out) {
    std::mt19937 rng(20260825);
    std::uniform_real_distribution<double> coef(-4.0, 4.0), cdist(-3.0, 3.0);

    std::vector<RandomCase> cases;
    long draws = 0;
    while (cases.size() < 1000) {
        ++draws;
        const FracOrders orders = draw_orders(rng);
        CharTriple t{coef(rng), coef(rng), cdist(rng)};
        if (draws % 5 == 0) t.a = 0.0; // visit the a = 0 / b = 0 criteria too
        if (draws % 7 == 0) t.b = 0.0;
        if (!sufficient_criteria(t, orders).empty()) cases.emplace_back(orders, t);
    }

    std::vector<std::string> errors(cases.size());
    detail::parallel_for(cases.size(), [&](std::size_t i) {
        try {
            const int z = winding_count(cases[i].triple, cases[i].orders);
            const bool zf = imaginary_zero_test(cases[i].triple, cases[i].orders).zero_free;
            if (z != 0 || !zf)
                errors[i] = fmt("winding %d, zero_free %d at (%.17g, %.17g, %.17g)", z,
                                (int)zf, cases[i].triple.a, cases[i].triple.b,
                                cases[i].triple.c);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    int bad = 0;
    for (const std::string& e : errors)
        if (!e.empty() && bad++ < 5) out.notes.push_back(e);
    if (bad > 0) {
        out.pass = false;
        out.notes.push_back(fmt("%d of 1000 criteria-satisfying draws violated", bad));
    } else {
        out.notes.push_back(
            fmt("1000 draws (%ld sampled): winding 0 and zero-free axis in every case",
                draws));
    }
}

// ---- criterion 3: explicit zero-free conditions vs the verified scan ------

void criterion_corollary(Outcome& out) {
    std::mt19937 rng(314159);
    std::uniform_real_distribution<double> ab(0.05, 4.0), cdist(0.05, 3.0);
    int contradictions = 0, corollary_hits = 0, scan_hits = 0;
    for (int i = 0; i < 1000; ++i) {
        const FracOrders orders = draw_orders(rng);
        const CharTriple t{ab(rng), ab(rng), cdist(rng)};
        const ImaginaryZeroReport rep = imaginary_zero_test(t, orders);
        if (!rep.corollary_zero_free.has_value()) continue; // a,b > 0 always here
        if (*rep.corollary_zero_free) ++corollary_hits;
        if (!rep.scan_roots_omega.empty()) ++scan_hits;
        // the conditions are one-sided: they may only err by *claiming* zero
        // freedom, so a contradiction is corollary-true with a verified root
        if (*rep.corollary_zero_free && !rep.scan_roots_omega.empty()) {
            ++contradictions;
            if (contradictions <= 5)
                out.notes.push_back(fmt("claimed zero-free, scan root at omega=%.12g "
                                        "for (%.17g, %.17g, %.17g)",
                                        rep.scan_roots_omega.front(), t.a, t.b, t.c));
        }
    }
    out.pass = contradictions == 0;
    out.notes.push_back(fmt("contradictions %d / 1000 (corollary claimed zero-free in "
                            "%d cases, scan found roots in %d)",
                            contradictions, corollary_hits, scan_hits));
}

// ---- criterion 4: kernel quadrature vs Mittag-Leffler series ---------------

void criterion_ml_oracle(Outcome& out) {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> diag(-2.0, -0.1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const FracOrders orders = draw_orders(rng);
        const double a11 = diag(rng), a22 = diag(rng);
        const LaplaceKernels kernels(CharTriple{a11, a22, a11 * a22}, orders);
        const double a1 = orders.alpha1(), a2 = orders.alpha2();
        for (int j = 0; j <= 16; ++j) {
            const double t = 0.1 * std::pow(20.0, j / 16.0);
            const KernelValues k = kernels.eval_all(t);
            const double p1 = std::pow(t, a1), p2 = std::pow(t, a2);
            worst = std::max(
                worst, oracles::rel_err(k.r0 - a22 * k.r_alpha2,
                                        (double)oracles::mittag_leffler(a1, a11 * p1)));
            worst = std::max(
                worst, oracles::rel_err(k.r0 - a11 * k.r_alpha1,
                                        (double)oracles::mittag_leffler(a2, a22 * p2)));
            worst = std::max(
                worst,
                oracles::rel_err(k.s_alpha1 - a22 * k.s_l,
                                 (p1 / t) * (double)oracles::mittag_leffler(a1, a1, a11 * p1)));
            worst = std::max(
                worst,
                oracles::rel_err(k.s_alpha2 - a11 * k.s_l,
                                 (p2 / t) * (double)oracles::mittag_leffler(a2, a2, a22 * p2)));
        }
    }
    out.pass = worst < 1e-6;
    out.notes.push_back(
        fmt("worst relative error %.3e over 20 diagonal systems x 17 times x 4 "
            "identities (limit 1e-6)",
            worst));
}

// ---- criterion 5: kernel asymptotics and S-kernel integrability ------------

void criterion_asymptotics(Outcome& out) {
    const char* kname[6] = {"R0", "Ra1", "Ra2", "Sa1", "Sa2", "Sl"};
    for (int n : {1, 3, 5, 7}) {
        const ExampleSpec ex = paper_example(n);
        const CharTriple triple = char_coeffs(ex.system);
        const FracOrders& orders = ex.system.orders;
        const double nu = orders.nu();
        const LaplaceKernels kernels(triple, orders);

        // dyadic running sups of t^nu |R| and t^{nu+1} |S| over t = 2^0..2^7
        double sup[6] = {0, 0, 0, 0, 0, 0};
        double m5[6], m7[6];
        for (int k = 0; k <= 7; ++k) {
            const double t = std::pow(2.0, k);
            const KernelValues v = kernels.eval_all(t);
            const double wr = std::pow(t, nu), ws = std::pow(t, nu + 1.0);
            const double scaled[6] = {wr * std::fabs(v.r0),       wr * std::fabs(v.r_alpha1),
                                      wr * std::fabs(v.r_alpha2), ws * std::fabs(v.s_alpha1),
                                      ws * std::fabs(v.s_alpha2), ws * std::fabs(v.s_l)};
            for (int j = 0; j < 6; ++j) {
                sup[j] = std::max(sup[j], scaled[j]);
                if (k == 5) m5[j] = sup[j];
                if (k == 7) m7[j] = sup[j];
            }
        }
        double worst_growth = 0.0;
        int worst_j = 0;
        for (int j = 0; j < 6; ++j) {
            if (!std::isfinite(sup[j])) out.pass = false;
            const double g = (m7[j] - m5[j]) / std::max(m5[j], 1e-300);
            if (g > worst_growth) {
                worst_growth = g;
                worst_j = j;
            }
        }
        if (worst_growth > 0.05) {
            out.pass = false;
            out.notes.push_back(fmt("example %d: dyadic sup of %s grew %.2f%% over the "
                                    "last three dyadic points (limit 5%%)",
                                    n, kname[worst_j], 100.0 * worst_growth));
        } else {
            out.notes.push_back(fmt("example %d: dyadic sups bounded, worst growth "
                                    "%.2f%% (%s, limit 5%%)",
                                    n, 100.0 * worst_growth, kname[worst_j]));
        }

        // partial integrals of |S^beta| over [2^-10, 2^10], trapezoid in ln t
        // at two refinement levels; the window reaches 2^10 so the slowly
        // damped oscillation a pole pair next to the axis injects (example 1
        // decays like e^{-0.031 t}) has died before the last dyadic block
        auto integrate = [&](int panels, double I_half[3], double I_full[3]) {
            const double u_lo = -10.0 * std::log(2.0), u_hi = 10.0 * std::log(2.0);
            const double du = (u_hi - u_lo) / panels;
            std::vector<std::array<double, 3>> w(panels + 1);
            std::vector<double> ts(panels + 1);
            for (int i = 0; i <= panels; ++i) ts[i] = std::exp(u_lo + i * du);
            detail::parallel_for(ts.size(), [&](std::size_t i) {
                const KernelValues v = kernels.eval_all(ts[i]);
                w[i] = {ts[i] * std::fabs(v.s_alpha1), ts[i] * std::fabs(v.s_alpha2),
                        ts[i] * std::fabs(v.s_l)};
            });
            const int cut = panels * 19 / 20; // node at exactly t = 2^9
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                I_half[j] = 0.0;
                for (int i = 0; i < panels; ++i) {
                    acc += 0.5 * du * (w[i][j] + w[i + 1][j]);
                    if (i + 1 == cut) I_half[j] = acc;
                }
                I_full[j] = acc;
            }
        };
        double c512[3], c1024[3], f512[3], f1024[3];
        integrate(20 * 128, c512, c1024);
        integrate(20 * 256, f512, f1024);
        for (int j = 0; j < 3; ++j) {
            const double refine = std::fabs(c1024[j] - f1024[j]) / std::max(f1024[j], 1e-300);
            const double growth = (f1024[j] - f512[j]) / std::max(f512[j], 1e-300);
            const bool ok = refine <= 1e-4 && growth < 0.01;
            if (!ok) out.pass = false;
            out.notes.push_back(
                fmt("example %d: int |%s|: last-block growth %.2f%% (limit 1%%), "
                    "refinement agreement %.1e (limit 1e-4)%s",
                    n, kname[3 + j], 100.0 * growth, refine, ok ? "" : "  <-- VIOLATION"));
        }
    }
}

// ---- criterion 6: cross-solver equivalence ---------------------------------

void criterion_cross_solver(Outcome& out) {
    for (int n : {1, 3, 5, 7}) {
        const ExampleSpec ex = paper_example(n);
        const Trajectory voc = linear_voc_solution(ex.system, ex.x0, 1.0 / 200.0, 10.0);
        StepperConfig cfg;
        cfg.h = 1.0 / 200.0;
        cfg.t_end = 10.0;
        const Trajectory pi = solve_pi_trapezoidal(ex.system, ex.x0, cfg);
        const double rel = max_gap(voc, pi) / max_norm(voc);
        const bool ok = rel < 1e-3;
        if (!ok) out.pass = false;
        out.notes.push_back(fmt("example %d: VoC vs PI relative gap %.2e (limit 1e-3)%s",
                                n, rel, ok ? "" : "  <-- VIOLATION"));
        if (!ok) {
            // show that the gap is the stepper's own O(h^{1+alpha1}) error at
            // the fixed h: against the same VoC curve it shrinks with h
            cfg.h = 1.0 / 400.0;
            const Trajectory fine = solve_pi_trapezoidal(ex.system, ex.x0, cfg);
            double g = 0.0;
            for (std::size_t k = 0; k < voc.size(); ++k)
                g = std::max(g, (voc.samples[k] - fine.samples[2 * k]).norm_max());
            out.notes.push_back(
                fmt("           evidence: same gap at h=1/400 is %.2e (ratio %.2f; "
                    "2^(1+alpha1) = %.2f), so PI converges to VoC as h -> 0",
                    g / max_norm(voc), rel * max_norm(voc) / g,
                    std::pow(2.0, 1.0 + ex.system.orders.alpha1())));
        }
    }
    for (int n : {2, 4, 6, 8}) {
        const ExampleSpec ex = paper_example(n);
        const Vec2 x0{0.1, -0.2};
        StepperConfig cfg;
        cfg.h = 1.0 / 200.0;
        cfg.t_end = 20.0;
        const Trajectory pi = solve_pi_trapezoidal(ex.system, x0, cfg);
        try {
            const Trajectory pic = solve_nonlinear_picard(ex.system, x0, 1.0 / 200.0, 20.0);
            const double rel = max_gap(pic, pi) / max_norm(pi);
            const bool ok = rel < 5e-3;
            if (!ok) out.pass = false;
            out.notes.push_back(fmt("example %d: Picard vs PI relative gap %.2e (limit 5e-3)%s",
                                    n, rel, ok ? "" : "  <-- VIOLATION"));
        } catch (const Error& e) {
            out.pass = false;
            out.notes.push_back(fmt("example %d: Picard failed on [0,20]: %s  <-- VIOLATION",
                                    n, e.what()));
            // the fixed-point iteration is only a contraction up to a finite
            // horizon here; show it agrees with PI where it does converge
            try {
                StepperConfig short_cfg;
                short_cfg.h = 1.0 / 200.0;
                short_cfg.t_end = 2.0;
                const Trajectory pi2 = solve_pi_trapezoidal(ex.system, x0, short_cfg);
                const Trajectory pic2 =
                    solve_nonlinear_picard(ex.system, x0, 1.0 / 200.0, 2.0);
                out.notes.push_back(
                    fmt("           evidence: on [0,2] Picard converges and matches PI "
                        "to %.2e relative",
                        max_gap(pic2, pi2) / max_norm(pi2)));
            } catch (const Error& e2) {
                out.notes.push_back(
                    fmt("           evidence run on [0,2] also failed: %s", e2.what()));
            }
        }
    }
}

// ---- criterion 7: decay rates on the examples ------------------------------

void criterion_decay(Outcome& out) {
    StepperConfig cfg;
    cfg.h = 1.0 / 200.0;
    cfg.t_end = 100.0;
    // when a fit over the fixed [50,100] window misses, check whether the
    // window is simply pre-asymptotic: refit over [200,400] on a longer run
    const auto late_fit = [](const PlanarSystem& sys, Vec2 x0, double nu) {
        StepperConfig long_cfg;
        long_cfg.h = 1.0 / 100.0;
        long_cfg.t_end = 400.0;
        const Trajectory t = solve_pi_trapezoidal(sys, x0, long_cfg);
        return decay_exponent(t, nu, 200.0, 400.0).fitted_mu;
    };
    for (int n : {1, 3, 5, 7}) {
        const ExampleSpec ex = paper_example(n);
        const Trajectory traj = solve_pi_trapezoidal(ex.system, ex.x0, cfg);
        const DecayReport rep = decay_exponent(traj, ex.nu, 50.0, 100.0);
        const bool ok = std::fabs(rep.fitted_mu - ex.nu) <= 0.15;
        if (!ok) out.pass = false;
        out.notes.push_back(fmt("example %d: fitted exponent %.3f vs nu %.3f%s", n,
                                rep.fitted_mu, ex.nu, ok ? "" : "  <-- off by > 0.15"));
        if (!ok)
            out.notes.push_back(fmt("           evidence: refit over [200,400] gives "
                                    "%.3f, so [50,100] is pre-asymptotic here",
                                    late_fit(ex.system, ex.x0, ex.nu)));
    }
    const double m_bound = 10.0;
    for (int n : {2, 4, 6, 8}) {
        const ExampleSpec ex = paper_example(n);
        const Vec2 x0{0.1, -0.2};
        const Trajectory traj = solve_pi_trapezoidal(ex.system, x0, cfg);
        const DecayReport rep = decay_exponent(traj, ex.nu, 50.0, 100.0);
        const bool ml = ml_stability_check(traj, ex.nu, m_bound);
        const bool fit_ok = std::fabs(rep.fitted_mu - ex.nu) <= 0.15;
        const bool ok = ml && fit_ok;
        if (!ok) out.pass = false;
        out.notes.push_back(fmt("example %d: fitted %.3f vs nu %.3f, weighted norm "
                                "within %g: %s%s",
                                n, rep.fitted_mu, ex.nu, m_bound, ml ? "yes" : "NO",
                                ok ? "" : "  <-- violation"));
        if (!fit_ok)
            out.notes.push_back(fmt("           evidence: refit over [200,400] gives "
                                    "%.3f, so [50,100] is pre-asymptotic here",
                                    late_fit(ex.system, x0, ex.nu)));
    }
    const ExampleSpec ex2 = paper_example(2);
    const Trajectory far = solve_pi_trapezoidal(ex2.system, *ex2.x0_alt, cfg);
    const DecayReport rep = decay_exponent(far, ex2.nu, 50.0, 100.0);
    const bool ok = rep.verdict == DecayVerdict::BoundedNoDecay;
    if (!ok) out.pass = false;
    out.notes.push_back(fmt("example 2 from (1,-1): verdict %s (expected BoundedNoDecay)",
                            to_string(rep.verdict).c_str()));
}

// ---- criterion 8: solver convergence on scalar reductions ------------------

void criterion_convergence(Outcome& out) {
    PlanarSystem sys{FracOrders(1.0 / 3.0, 0.5), Mat2{-1.0, 0.0, 0.0, -0.5},
                     Forcing::none(), {}};
    const double w1 = (double)oracles::mittag_leffler(1.0 / 3.0, -1.0);
    const double w2 = (double)oracles::mittag_leffler(0.5, -0.5);
    auto errors = [&](double h) {
        StepperConfig cfg;
        cfg.h = h;
        cfg.t_end = 1.0;
        const Vec2 xe = solve_pi_trapezoidal(sys, {1.0, 1.0}, cfg).samples.back();
        return Vec2{std::fabs(xe.x1 - w1), std::fabs(xe.x2 - w2)};
    };
    const Vec2 coarse = errors(1.0 / 100.0);
    const Vec2 fine = errors(1.0 / 200.0);
    const double r1 = coarse.x1 / fine.x1, r2 = coarse.x2 / fine.x2;
    out.pass = r1 >= 2.0 && r2 >= 2.0 && fine.norm_max() < 1e-3;
    out.notes.push_back(fmt("component errors at h=1/200: %.2e, %.2e (limit 1e-3)",
                            fine.x1, fine.x2));
    out.notes.push_back(fmt("halving ratios: %.2f, %.2f (limit >= 2)", r1, r2));
}

} // namespace

int main() {
    std::printf("acceptance: incommensurate planar fractional systems\n");
    run_criterion(1, "criteria nonempty and winding zero on the 8 examples", 10,
                  criterion_examples);
    run_criterion(2, "1000 criteria-satisfying random triples are zero-free", 120,
                  criterion_soundness);
    run_criterion(3, "explicit zero-free conditions never contradict the scan", 60,
                  criterion_corollary);
    run_criterion(4, "contour kernels match Mittag-Leffler series to 1e-6", 0,
                  criterion_ml_oracle);
    run_criterion(5, "kernel asymptotics: dyadic sups and S integrability", 0,
                  criterion_asymptotics);
    run_criterion(6, "cross-solver equivalence (VoC/PI, Picard/PI)", 300,
                  criterion_cross_solver);
    run_criterion(7, "decay-rate reproduction on all examples", 600, criterion_decay);
    run_criterion(8, "PI-trapezoidal convergence on scalar reductions", 0,
                  criterion_convergence);
    std::printf("%d of 8 criteria passed\n", 8 - g_failures);
    return g_failures;
}
