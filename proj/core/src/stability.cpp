#include "fracplanar/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stack>

namespace fracplanar {

std::string to_string(CriterionTag tag) {
    switch (tag) {
        case CriterionTag::L3_2: return "L3.2";
        case CriterionTag::L3_3: return "L3.3";
        case CriterionTag::L3_4: return "L3.4";
        case CriterionTag::L3_5i: return "L3.5i";
        case CriterionTag::L3_5ii: return "L3.5ii";
        case CriterionTag::L3_6i: return "L3.6i";
        case CriterionTag::L3_6ii: return "L3.6ii";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::AsymptoticallyStable: return "AsymptoticallyStable";
        case Stability::NotAsymptoticallyStable: return "NotAsymptoticallyStable";
        case Stability::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

double bisect_h2(const CharTriple& triple, const FracOrders& orders, double lo, double hi) {
    double flo = boundary_trace(triple, orders, lo).h2;
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = boundary_trace(triple, orders, mid).h2;
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

ImaginaryZeroReport imaginary_zero_test(const CharTriple& triple, const FracOrders& orders) {
    if (!(triple.c > 0.0))
        throw NonpositiveC("imaginary_zero_test requires c > 0, got c = " +
                           std::to_string(triple.c));
    const TrigConsts tc = trig_consts(orders);
    const double a = triple.a, b = triple.b, c = triple.c;
    const double r1 = tc.rho1, r2 = tc.rho2;

    ImaginaryZeroReport rep;
    rep.discriminant = (a * b - c * (r1 + r2) * (r1 + r2)) * (a * b - c * (r2 - r1) * (r2 - r1));

    // reduced equation a r1 X^2 + (ab - c(r2^2 - r1^2)) X + b c r1 = 0, X = omega^{alpha2}
    const double B = a * b - c * (r2 * r2 - r1 * r1);
    if (a != 0.0) {
        if (rep.discriminant >= 0.0) {
            const double sq = std::sqrt(rep.discriminant);
            // Citardauq form for the smaller-magnitude root to avoid cancellation
            const double q = -0.5 * (B + std::copysign(sq, B));
            const double A2 = a * r1, C2 = b * c * r1;
            if (q != 0.0) {
                rep.roots_X.push_back(q / A2);
                rep.roots_X.push_back(C2 / q);
            } else {
                rep.roots_X.push_back(0.0);
            }
        }
    } else if (B != 0.0) {
        rep.roots_X.push_back(-b * c * r1 / B);
    }

    if (a > 0.0 && b > 0.0) {
        const bool cond_i = c * (r2 * r2 - r1 * r1) < a * b && a * b < c * (r2 * r2 + r1 * r1);
        const bool cond_ii = a * b <= c * (r2 - r1) * (r2 - r1);
        rep.corollary_zero_free = cond_i || cond_ii;
    }

    // Independent scan: locate roots of h2 on a log grid, refine by bisection,
    // then test whether the imaginary-zero equation pair
    //   a = rho2 w^{a1} - c rho1 w^{-a2},  b = c rho2 w^{-a1} - rho1 w^{a2}
    // holds there to relative tolerance 1e-9.
    const double wmax =
        std::max(2.0, std::pow((std::abs(a) + std::abs(b)) * tc.q2 + 1.0, 1.0 / orders.alpha1()));
    const double wmin = 1e-6;
    const int n = 2048;
    double prev_w = wmin;
    double prev_h2 = boundary_trace(triple, orders, prev_w).h2;
    for (int i = 1; i <= n; ++i) {
        const double w = wmin * std::pow(wmax / wmin, static_cast<double>(i) / n);
        const double h2 = boundary_trace(triple, orders, w).h2;
        if ((prev_h2 <= 0.0) != (h2 <= 0.0) || h2 == 0.0) {
            const double wr = h2 == 0.0 ? w : bisect_h2(triple, orders, prev_w, w);
            const double lhs_a = r2 * std::pow(wr, orders.alpha1()) -
                                 c * r1 * std::pow(wr, -orders.alpha2());
            const double lhs_b = c * r2 * std::pow(wr, -orders.alpha1()) -
                                 r1 * std::pow(wr, orders.alpha2());
            const double scale_a =
                std::max(1.0, std::abs(a) + r2 * std::pow(wr, orders.alpha1()) +
                                  c * r1 * std::pow(wr, -orders.alpha2()));
            const double scale_b =
                std::max(1.0, std::abs(b) + c * r2 * std::pow(wr, -orders.alpha1()) +
                                  r1 * std::pow(wr, orders.alpha2()));
            if (std::abs(lhs_a - a) <= 1e-9 * scale_a && std::abs(lhs_b - b) <= 1e-9 * scale_b)
                rep.scan_roots_omega.push_back(wr);
        }
        prev_w = w;
        prev_h2 = h2;
    }

    rep.zero_free = rep.scan_roots_omega.empty();
    return rep;
}

namespace {

bool near_equal(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

void note_boundary(std::vector<std::string>* notes, CriterionTag tag, const char* what) {
    if (notes) notes->push_back("criterion boundary: " + to_string(tag) + " " + what);
}

} // namespace

std::vector<CriterionTag> sufficient_criteria(const CharTriple& triple, const FracOrders& orders,
                                              std::vector<std::string>* notes) {
    const double a = triple.a, b = triple.b, c = triple.c;
    const TrigConsts tc = trig_consts(orders);
    const double q1 = tc.q1, q2 = tc.q2;
    const double e21 = orders.alpha2() / orders.alpha1(); // exponent alpha2/alpha1
    const double e12 = orders.alpha1() / orders.alpha2();

    std::vector<CriterionTag> hit;

    if (a <= 0.0 && b <= 0.0 && c > 0.0) hit.push_back(CriterionTag::L3_2);

    if (a == 0.0 && b > 0.0) {
        const double bound = std::pow(b * q1, e12) * b * q2;
        if (c > bound) hit.push_back(CriterionTag::L3_3);
        if (near_equal(c, bound)) note_boundary(notes, CriterionTag::L3_3, "c vs (b q1)^{a1/a2} b q2");
    }

    if (b == 0.0 && a > 0.0) {
        const double bound = std::pow(a * q2, e21) * a * q1;
        if (c > bound) hit.push_back(CriterionTag::L3_4);
        if (near_equal(c, bound)) note_boundary(notes, CriterionTag::L3_4, "c vs (a q2)^{a2/a1} a q1");
    }

    if (a > 0.0 && b > 0.0 && c > 0.0) {
        const double gate = a * q2 + b * q1;
        if (near_equal(gate, 1.0)) note_boundary(notes, CriterionTag::L3_5i, "a q2 + b q1 vs 1");
        if (gate > 1.0) {
            const double lhs = a * q2 * std::pow((a + b) * q2, e21) + b * (a + b) * q2 * q2;
            if (lhs <= c) hit.push_back(CriterionTag::L3_5i);
            if (near_equal(lhs, c)) note_boundary(notes, CriterionTag::L3_5i, "bound vs c");
        } else {
            const double lhs = a * q1 + b * q2;
            if (lhs < c) hit.push_back(CriterionTag::L3_5ii);
            if (near_equal(lhs, c)) note_boundary(notes, CriterionTag::L3_5ii, "a q1 + b q2 vs c");
        }
    }

    if (a < 0.0 && b > 0.0 && c > 0.0) {
        const double gate = a * q2 + b * q1;
        if (near_equal(gate, 1.0)) note_boundary(notes, CriterionTag::L3_6i, "a q2 + b q1 vs 1");
        if (gate > 1.0) {
            const double lhs = std::pow(b * q1, e12) * b * q2;
            if (lhs <= c) hit.push_back(CriterionTag::L3_6i);
            if (near_equal(lhs, c)) note_boundary(notes, CriterionTag::L3_6i, "bound vs c");
        } else {
            if (b * q2 <= c) hit.push_back(CriterionTag::L3_6ii);
            if (near_equal(b * q2, c)) note_boundary(notes, CriterionTag::L3_6ii, "b q2 vs c");
        }
    }

    return hit;
}

namespace {

using Cplx = std::complex<double>;

// One oriented contour piece: s(u) for u in [0,1].
struct Piece {
    std::function<Cplx(double)> point;
};

struct ArgAccumulator {
    const CharTriple& triple;
    const FracOrders& orders;
    std::size_t budget;
    std::size_t used = 0;
    double min_rel_q = std::numeric_limits<double>::infinity();

    Cplx eval(Cplx s) {
        if (++used > budget)
            throw BudgetExhausted("winding refinement exceeded the evaluation budget");
        const Cplx q = eval_Q(triple, orders, s);
        const double rel = std::abs(q) / q_scale(triple, orders, std::abs(s));
        min_rel_q = std::min(min_rel_q, rel);
        if (rel < 1e-10)
            throw ZeroOnContour("|Q| fell below 1e-10 of its local scale on the contour");
        return q;
    }

    // total arg change along one piece, adaptively refined so each accepted
    // step has |delta arg| <= pi/4
    double piece_arg(const Piece& piece, int initial) {
        double total = 0.0;
        struct Seg {
            double u0, u1;
            Cplx q0, q1;
        };
        std::stack<Seg> work;
        std::vector<Cplx> qs(initial + 1);
        for (int i = 0; i <= initial; ++i)
            qs[i] = eval(piece.point(static_cast<double>(i) / initial));
        for (int i = initial; i > 0; --i)
            work.push({static_cast<double>(i - 1) / initial, static_cast<double>(i) / initial,
                       qs[i - 1], qs[i]});
        while (!work.empty()) {
            const Seg seg = work.top();
            work.pop();
            const double dphi = std::arg(seg.q1 / seg.q0);
            if (std::abs(dphi) <= M_PI / 4.0) {
                total += dphi;
                continue;
            }
            const double um = 0.5 * (seg.u0 + seg.u1);
            if (um <= seg.u0 || um >= seg.u1)
                throw ZeroOnContour("argument jump persists at machine resolution; "
                                    "a zero of Q lies on or next to the contour");
            const Cplx qm = eval(piece.point(um));
            work.push({seg.u0, um, seg.q0, qm});
            work.push({um, seg.u1, qm, seg.q1});
        }
        return total;
    }
};

double winding_inner_eps(const CharTriple& triple, const FracOrders& orders) {
    if (triple.c == 0.0)
        throw NonpositiveC("winding_count requires c != 0 (s = 0 is a zero of Q when c = 0)");
    // |Q(s)| >= |c|/2 on |s| <= eps holds with |c| by the same triangle bound
    return inner_radius({triple.a, triple.b, std::abs(triple.c)}, orders);
}

} // namespace

WindingResult winding_count_detail(const CharTriple& triple, const FracOrders& orders,
                                   const WindingOptions& opts) {
    const double eps = winding_inner_eps(triple, orders);
    const double R = outer_radius(triple, orders);

    // counter-clockwise boundary of the right-half annulus eps <= |s| <= R:
    // outer arc, imaginary axis down, inner arc, imaginary axis down (negative side)
    const Piece outer{[R](double u) {
        return std::polar(R, -M_PI / 2.0 + M_PI * u);
    }};
    const Piece axis_upper{[R, eps](double u) {
        return Cplx(0.0, R * std::pow(eps / R, u));
    }};
    const Piece inner{[eps](double u) {
        return std::polar(eps, M_PI / 2.0 - M_PI * u);
    }};
    const Piece axis_lower{[R, eps](double u) {
        return Cplx(0.0, -eps * std::pow(R / eps, u));
    }};

    ArgAccumulator acc{triple, orders, opts.budget};
    double total = 0.0;
    for (const Piece* p : {&outer, &axis_upper, &inner, &axis_lower})
        total += acc.piece_arg(*p, opts.initial_per_piece);

    WindingResult res;
    const double turns = total / (2.0 * M_PI);
    res.zeros = static_cast<int>(std::lround(turns));
    res.residual = std::abs(turns - res.zeros);
    res.min_rel_q = acc.min_rel_q;
    res.samples = acc.used;
    res.inner_eps = eps;
    res.outer_R = R;
    return res;
}

int winding_count(const CharTriple& triple, const FracOrders& orders,
                  const WindingOptions& opts) {
    return winding_count_detail(triple, orders, opts).zeros;
}

int winding_count_half(const CharTriple& triple, const FracOrders& orders,
                       const WindingOptions& opts) {
    const double eps = winding_inner_eps(triple, orders);
    const double R = outer_radius(triple, orders);

    // upper halves only; the mirrored lower halves contribute the same arg
    // change because Q(conj s) = conj Q(s)
    const Piece outer_upper{[R](double u) { return std::polar(R, M_PI / 2.0 * u); }};
    const Piece axis_upper{[R, eps](double u) {
        return Cplx(0.0, R * std::pow(eps / R, u));
    }};
    const Piece inner_upper{[eps](double u) {
        return std::polar(eps, M_PI / 2.0 * (1.0 - u));
    }};

    ArgAccumulator acc{triple, orders, opts.budget};
    double half = 0.0;
    for (const Piece* p : {&outer_upper, &axis_upper, &inner_upper})
        half += acc.piece_arg(*p, opts.initial_per_piece);
    return static_cast<int>(std::lround(half / M_PI));
}

StabilityVerdict stability_verdict(const PlanarSystem& system) {
    const PlanarSystem sys = validate(system);
    const CharTriple triple = char_coeffs(sys);

    StabilityVerdict v;
    auto add_note = [&v](const std::string& s) {
        if (!v.diagnostics.empty()) v.diagnostics += "; ";
        v.diagnostics += s;
    };

    if (triple.c <= 0.0) {
        v.status = Stability::NotAsymptoticallyStable;
        add_note(triple.c == 0.0
                     ? "c = det A = 0: s = 0 is a boundary zero of Q"
                     : "c = det A < 0: Q has a positive real zero");
        return v;
    }

    std::vector<std::string> notes;
    v.criteria_hit = sufficient_criteria(triple, sys.orders, &notes);
    for (const auto& n : notes) add_note(n);

    try {
        v.imaginary_zero_free = imaginary_zero_test(triple, sys.orders).zero_free;
    } catch (const Error& e) {
        add_note(std::string("imaginary-zero test failed: ") + e.what());
    }

    try {
        v.winding_count = winding_count(triple, sys.orders);
    } catch (const Error& e) {
        add_note(std::string("winding count failed: ") + e.what());
    }

    if (!v.criteria_hit.empty()) {
        v.status = Stability::AsymptoticallyStable;
        if (v.winding_count && *v.winding_count != 0)
            add_note("warning: winding count contradicts a sufficient criterion");
        return v;
    }
    if (v.winding_count) {
        if (*v.winding_count == 0 && v.imaginary_zero_free.value_or(false)) {
            v.status = Stability::AsymptoticallyStable;
            return v;
        }
        if (*v.winding_count >= 1) {
            v.status = Stability::NotAsymptoticallyStable;
            add_note("winding count found " + std::to_string(*v.winding_count) +
                     " right-half-plane zero(s)");
            return v;
        }
    }
    v.status = Stability::Inconclusive;
    if (v.winding_count && !v.imaginary_zero_free.value_or(true))
        add_note("imaginary-axis zeros detected by the scan");
    return v;
}

} // namespace fracplanar
