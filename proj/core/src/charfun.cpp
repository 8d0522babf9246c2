#include "fracplanar/charfun.hpp"

#include <cmath>

namespace fracplanar {

std::complex<double> principal_pow(std::complex<double> s, double p) {
    if (p == 0.0) return {1.0, 0.0};
    if (s == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    double theta = std::atan2(s.imag(), s.real());
    // atan2 returns -pi for arguments just below the cut; fold onto (-pi, pi].
    if (theta == -M_PI) theta = M_PI;
    const double r = std::pow(std::abs(s), p);
    return std::polar(r, p * theta);
}

TrigConsts trig_consts(const FracOrders& orders) {
    const double a1 = orders.alpha1(), a2 = orders.alpha2();
    if (a1 == a2)
        throw DegenerateOrders("trigonometric constants require alpha1 < alpha2");
    const double s1 = std::sin(a1 * M_PI / 2.0);
    const double s2 = std::sin(a2 * M_PI / 2.0);
    const double sdiff = std::sin((a2 - a1) * M_PI / 2.0);
    const double ssum = std::sin((a1 + a2) * M_PI / 2.0);
    return {s1 / sdiff, s2 / sdiff, s1 / ssum, s2 / ssum};
}

std::complex<double> eval_Q(const CharTriple& triple, const FracOrders& orders,
                            std::complex<double> s) {
    return principal_pow(s, orders.l()) - triple.a * principal_pow(s, orders.alpha2()) -
           triple.b * principal_pow(s, orders.alpha1()) + triple.c;
}

double q_scale(const CharTriple& triple, const FracOrders& orders, double abs_s) {
    return std::pow(abs_s, orders.l()) + std::abs(triple.a) * std::pow(abs_s, orders.alpha2()) +
           std::abs(triple.b) * std::pow(abs_s, orders.alpha1()) + std::abs(triple.c);
}

BoundaryTrace boundary_trace(const CharTriple& triple, const FracOrders& orders, double omega) {
    const double a1 = orders.alpha1(), a2 = orders.alpha2(), l = orders.l();
    const double wl = std::pow(omega, l), w2 = std::pow(omega, a2), w1 = std::pow(omega, a1);
    BoundaryTrace tr;
    tr.h1 = wl * std::cos(l * M_PI / 2.0) - triple.a * w2 * std::cos(a2 * M_PI / 2.0) -
            triple.b * w1 * std::cos(a1 * M_PI / 2.0) + triple.c;
    tr.h2 = wl * std::sin(l * M_PI / 2.0) - triple.a * w2 * std::sin(a2 * M_PI / 2.0) -
            triple.b * w1 * std::sin(a1 * M_PI / 2.0);
    return tr;
}

namespace {

// Smallest root of the monotone deficit g on [lo, hi] (g(lo) < 0 <= g(hi)),
// bisected to 1e-9 relative width; returns the endpoint where g >= 0.
template <class F>
double bisect_up(F&& g, double lo, double hi) {
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

double outer_radius(const CharTriple& triple, const FracOrders& orders) {
    const auto deficit = [&](double R) {
        return std::pow(R, orders.l()) -
               2.0 * (std::abs(triple.a) * std::pow(R, orders.alpha2()) +
                      std::abs(triple.b) * std::pow(R, orders.alpha1()) + std::abs(triple.c));
    };
    if (deficit(1.0) >= 0.0) return 1.0;
    double hi = 2.0;
    while (deficit(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e300) throw Error("outer_radius: no admissible radius found");
    }
    return bisect_up(deficit, hi / 2.0, hi);
}

double inner_radius(const CharTriple& triple, const FracOrders& orders) {
    if (!(triple.c > 0.0))
        throw NonpositiveC("inner_radius requires c > 0, got c = " + std::to_string(triple.c));
    const auto margin = [&](double e) {
        return triple.c / 2.0 - (std::pow(e, orders.l()) +
                                 std::abs(triple.a) * std::pow(e, orders.alpha2()) +
                                 std::abs(triple.b) * std::pow(e, orders.alpha1()));
    };
    double hi = 1.0;
    while (margin(hi) >= 0.0) hi *= 2.0; // c/2 can exceed the sum at eps = 1
    double lo = hi / 2.0;
    while (margin(lo) < 0.0) {
        lo /= 2.0;
        if (lo < 1e-300) throw Error("inner_radius: search underflow");
    }
    // keep the side where the defining inequality is guaranteed
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

} // namespace fracplanar
