#include "fracplanar/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include "fracplanar/detail/gauss.hpp"
#include "fracplanar/detail/parallel.hpp"
#include "fracplanar/stability.hpp"

namespace fracplanar {

std::string to_string(RIndex k) {
    switch (k) {
        case RIndex::Zero: return "0";
        case RIndex::Alpha1: return "alpha1";
        case RIndex::Alpha2: return "alpha2";
    }
    return "?";
}

std::string to_string(SIndex k) {
    switch (k) {
        case SIndex::Alpha1: return "alpha1";
        case SIndex::Alpha2: return "alpha2";
        case SIndex::L: return "l";
    }
    return "?";
}

double index_exponent(RIndex k, const FracOrders& orders) {
    switch (k) {
        case RIndex::Zero: return 0.0;
        case RIndex::Alpha1: return orders.alpha1();
        case RIndex::Alpha2: return orders.alpha2();
    }
    return 0.0;
}

double index_exponent(SIndex k, const FracOrders& orders) {
    switch (k) {
        case SIndex::Alpha1: return orders.alpha1();
        case SIndex::Alpha2: return orders.alpha2();
        case SIndex::L: return orders.l();
    }
    return 0.0;
}

std::string SpecFunKind::index_label() const {
    return family == Family::R ? to_string(r) : to_string(s);
}

namespace {

using Cplx = std::complex<double>;

Cplx eval_dQ(const CharTriple& tr, const FracOrders& ord, Cplx s) {
    const double a1 = ord.alpha1(), a2 = ord.alpha2(), l = ord.l();
    return l * principal_pow(s, l - 1.0) - tr.a * a2 * principal_pow(s, a2 - 1.0) -
           tr.b * a1 * principal_pow(s, a1 - 1.0);
}

// Total change of arg Q along s(u), u in [0, 1], bisected until every
// accepted step turns by at most pi/4; nullopt when refinement stalls on a
// zero of Q sitting on (or next to) the path.
std::optional<double> arg_change(const CharTriple& triple, const FracOrders& orders,
                                 const std::function<Cplx(double)>& path) {
    struct Seg {
        double u0, u1;
        Cplx q0, q1;
    };
    constexpr int initial = 64;
    std::vector<Seg> work;
    std::vector<Cplx> qs(initial + 1);
    for (int i = 0; i <= initial; ++i)
        qs[i] = eval_Q(triple, orders, path(static_cast<double>(i) / initial));
    for (int i = initial; i > 0; --i)
        work.push_back({static_cast<double>(i - 1) / initial,
                        static_cast<double>(i) / initial, qs[i - 1], qs[i]});
    double total = 0.0;
    while (!work.empty()) {
        const Seg seg = work.back();
        work.pop_back();
        const double dphi = std::arg(seg.q1 / seg.q0);
        if (std::abs(dphi) <= M_PI / 4.0) {
            total += dphi;
            continue;
        }
        const double um = 0.5 * (seg.u0 + seg.u1);
        if (um <= seg.u0 || um >= seg.u1) return std::nullopt;
        const Cplx qm = eval_Q(triple, orders, path(um));
        work.push_back({seg.u0, um, seg.q0, qm});
        work.push_back({um, seg.u1, qm, seg.q1});
    }
    return total;
}

// Zeros of Q inside the annular sector r in [r_lo, r_hi], |arg s| <= theta,
// reported as their upper-half-plane representatives.  The boundary radii
// must be zero-free circles.  Counted by the argument principle, located by
// Newton from |Q| grid minima, and cross-checked against the count.
std::vector<Cplx> locate_sector_zeros(const CharTriple& triple, const FracOrders& orders,
                                      double r_lo, double r_hi, double theta) {
    int count = -1;
    for (double th : {theta, theta + 0.025, theta - 0.025}) {
        const auto outer = arg_change(triple, orders, [&](double u) {
            return std::polar(r_hi, th * (2.0 * u - 1.0));
        });
        const auto ray_dn = arg_change(triple, orders, [&](double u) {
            return std::polar(r_hi * std::pow(r_lo / r_hi, u), th);
        });
        const auto inner = arg_change(triple, orders, [&](double u) {
            return std::polar(r_lo, th * (1.0 - 2.0 * u));
        });
        const auto ray_up = arg_change(triple, orders, [&](double u) {
            return std::polar(r_lo * std::pow(r_hi / r_lo, u), -th);
        });
        if (!outer || !ray_dn || !inner || !ray_up) continue; // zero on a ray: jitter
        const double turns = (*outer + *ray_dn + *inner + *ray_up) / (2.0 * M_PI);
        const int n = static_cast<int>(std::lround(turns));
        if (std::abs(turns - n) > 0.25) continue;
        count = n;
        theta = th;
        break;
    }
    if (count < 0)
        throw ContourInvalid("cannot count the zeros of Q next to the imaginary axis: "
                             "a zero sits on every candidate sector boundary");
    if (count == 0) return {};
    if (count % 2 != 0)
        throw ContourInvalid("odd zero count in the symmetric sector next to the "
                             "imaginary axis; zero location is unreliable here");

    // Q(conj s) = conj Q(s) and the closed right half-plane is zero-free, so
    // all zeros form conjugate pairs in the band arg s in (pi/2, theta].
    const double phi_lo = M_PI / 2.0 - 0.02, phi_hi = theta;
    for (int nr = 192; nr <= 768; nr *= 2) {
        const int nphi = nr / 2;
        std::vector<Cplx> zeros;
        for (int i = 0; i <= nr; ++i) {
            const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / nr);
            for (int j = 0; j <= nphi; ++j) {
                const double phi = phi_lo + (phi_hi - phi_lo) * static_cast<double>(j) / nphi;
                Cplx s = std::polar(r, phi);
                if (std::abs(eval_Q(triple, orders, s)) > 0.25 * q_scale(triple, orders, r))
                    continue;
                bool ok = false;
                for (int it = 0; it < 80; ++it) {
                    const Cplx q = eval_Q(triple, orders, s);
                    const Cplx dq = eval_dQ(triple, orders, s);
                    if (!(std::abs(dq) > 0.0)) break;
                    const Cplx step = q / dq;
                    s -= step;
                    if (std::abs(step) <= 1e-14 * std::abs(s)) {
                        ok = true;
                        break;
                    }
                }
                if (!ok) continue;
                if (!(std::abs(eval_Q(triple, orders, s)) <=
                      1e-10 * q_scale(triple, orders, std::abs(s))))
                    continue;
                if (s.imag() <= 0.0 || std::arg(s) <= M_PI / 2.0 || std::arg(s) > theta)
                    continue;
                bool dup = false;
                for (const Cplx& z : zeros)
                    if (std::abs(z - s) <= 1e-6 * std::max(1.0, std::abs(z))) dup = true;
                if (!dup) zeros.push_back(s);
            }
        }
        if (2 * static_cast<int>(zeros.size()) == count) return zeros;
    }
    throw ContourInvalid("located fewer zeros of Q next to the imaginary axis than the "
                         "argument principle counted (" + std::to_string(count) + ")");
}

} // namespace

LaplaceKernels::LaplaceKernels(const CharTriple& triple, const FracOrders& orders)
    : triple_(triple), orders_(orders) {
    if (!(triple.c > 0.0))
        throw ContourInvalid("kernels require det A > 0; c <= 0 places a zero of Q on [0, inf)");
    try {
        if (!imaginary_zero_test(triple, orders).zero_free)
            throw ContourInvalid("kernels require Q zero-free on the imaginary axis");
        const int z = winding_count(triple, orders);
        if (z != 0)
            throw ContourInvalid("kernels require all zeros of Q in the open left half-plane; "
                                 "winding count found " + std::to_string(z));
    } catch (const ContourInvalid&) {
        throw;
    } catch (const Error& e) {
        throw ContourInvalid(std::string("right-half-plane zero check failed: ") + e.what());
    }
    eps_ = inner_radius(triple, orders);
    R_ = outer_radius(triple, orders);

    // Zeros with arg s barely past pi/2 are compatible with stability but lie
    // in the region swept when the Bromwich line deforms onto the contour;
    // find them now so eval_all can put their residues back.  The search
    // annulus pads the zero-free radii so its boundary circles stay clean.
    poles_ = locate_sector_zeros(triple_, orders_, 0.75 * eps_, 1.5 * R_,
                                 M_PI / 2.0 + 0.36);
    for (const Cplx& s : poles_) {
        const Cplx dq = eval_dQ(triple_, orders_, s);
        if (!(std::abs(dq) * std::abs(s) > 1e-8 * q_scale(triple_, orders_, std::abs(s))))
            throw ContourInvalid("Q has a (near-)double zero next to the imaginary axis; "
                                 "the residue correction needs simple zeros");
        dq_poles_.push_back(dq);
        pole_radii_.push_back(std::abs(s));
    }
    std::sort(pole_radii_.rbegin(), pole_radii_.rend());

    // pick the ray angle: start at delta = 0.3 and halve while the probe sees
    // |Q| small along the ray or a located zero sits within 0.03 rad of it
    delta_ = 0.3;
    for (;;) {
        const double theta = M_PI / 2.0 + delta_;
        const double r_lo = 0.5 * eps_, r_hi = 2.0 * R_;
        double min_rel = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 512; ++k) {
            const double r = r_lo * std::pow(r_hi / r_lo, k / 511.0);
            const Cplx q = eval_Q(triple_, orders_, std::polar(r, theta));
            min_rel = std::min(min_rel, std::abs(q) / q_scale(triple_, orders_, r));
        }
        bool clear = min_rel >= 1e-3;
        for (const Cplx& s : poles_)
            if (std::abs(std::arg(s) - theta) < 0.03) clear = false;
        if (clear) break;
        if (delta_ <= 0.01 + 1e-15)
            throw ContourInvalid("no contour angle found with |Q| bounded away from zero "
                                 "(delta reached the 0.01 floor)");
        delta_ = std::max(0.01, 0.5 * delta_);
    }
}

ContourSpec LaplaceKernels::contour_for(double t) const {
    if (!(t > 0.0)) throw ValidationError("kernel evaluation requires t > 0");
    ContourSpec cs;
    cs.theta = M_PI / 2.0 + delta_;
    // arc radius ~ 1/t: inside the zero-free disc for t >= 1, outside (or at
    // bounded size) for short times where e^{st} stays harmless on the arc
    cs.mu = t >= 1.0 ? eps_ / t : std::min(R_, 4.0) / t;
    // keep the arc a factor 2 in radius away from every sector pole so the
    // quadrature never grazes one and enclosure is never ambiguous (radii
    // descend, so each shrink stays consistent with the poles already passed)
    for (double rho : pole_radii_)
        if (cs.mu > 0.5 * rho && cs.mu < 2.0 * rho) cs.mu = 0.5 * rho;
    const double decay = t * (-std::cos(cs.theta)); // positive: e^{-decay r} on rays
    const double p_max = orders_.alpha2();          // largest algebraic growth s^p
    double rm = cs.mu + 45.0 / decay;               // e^{-45} ~ 3e-20
    for (int i = 0; i < 4; ++i)
        rm = cs.mu + (45.0 + p_max * std::log(std::max(rm, 1.0))) / decay;
    cs.r_max = std::max(rm, 4.0 * cs.mu);
    return cs;
}

// shared-node quadrature of all six kernel integrals along gamma(mu, theta)
std::array<Cplx, 6> LaplaceKernels::quadrature(double t, const ContourSpec& cs,
                                               int arc_nodes, int ray_nodes,
                                               double panel_ratio,
                                               std::array<double, 6>& l1) const {
    const double a = triple_.a, b = triple_.b, c = triple_.c;
    const double a1 = orders_.alpha1(), a2 = orders_.alpha2();

    std::array<Cplx, 6> acc{};
    l1.fill(0.0);

    auto add_node = [&](const Cplx& s, const Cplx& dweight) {
        const Cplx pa1 = principal_pow(s, a1);
        const Cplx pa2 = principal_pow(s, a2);
        const Cplx pl = pa1 * pa2; // same principal branch: exponents add
        const Cplx q = pl - a * pa2 - b * pa1 + c;
        const Cplx pref = dweight * std::exp(s * t);
        const Cplx inv_q = 1.0 / q;
        const Cplx inv_sq = inv_q / s;
        const Cplx contrib[6] = {
            pref * pl * inv_sq,   // R^0        : s^{l-1}/Q
            pref * pa2 * inv_sq,  // R^{alpha1} : s^{alpha2-1}/Q
            pref * pa1 * inv_sq,  // R^{alpha2} : s^{alpha1-1}/Q
            pref * pa2 * inv_q,   // S^{alpha1} : s^{alpha2}/Q
            pref * pa1 * inv_q,   // S^{alpha2} : s^{alpha1}/Q
            // S^l = L^{-1}{1/Q - 1/c}: subtracting the constant, whose inverse
            // transform vanishes for t > 0, kills the large-t cancellation
            pref * (a * pa2 + b * pa1 - pl) * inv_q / c,
        };
        for (int k = 0; k < 6; ++k) {
            acc[k] += contrib[k];
            l1[k] += std::abs(contrib[k]);
        }
    };

    const Cplx two_pi_i(0.0, 2.0 * M_PI);

    // arc s = mu e^{i phi}, phi in [-theta, theta]; ds = i s dphi
    const auto& arc = detail::gauss_legendre(arc_nodes);
    for (int k = 0; k < arc_nodes; ++k) {
        const double phi = cs.theta * arc.x[k];
        const Cplx s = std::polar(cs.mu, phi);
        add_node(s, arc.w[k] * cs.theta * Cplx(0.0, 1.0) * s / two_pi_i);
    }

    // rays in geometric panels [r0, r0*ratio] from mu to r_max; the lower ray
    // is traversed inward, hence the minus sign on its outward integral
    const auto& ray = detail::gauss_legendre(ray_nodes);
    const Cplx e_up = std::polar(1.0, cs.theta);
    const Cplx e_dn = std::conj(e_up);
    double r0 = cs.mu;
    while (r0 < cs.r_max) {
        const double r1 = std::min(r0 * panel_ratio, cs.r_max);
        if (!(r1 > r0)) break;
        const double mid = 0.5 * (r0 + r1), half = 0.5 * (r1 - r0);
        for (int k = 0; k < ray_nodes; ++k) {
            const double r = mid + half * ray.x[k];
            const double w = ray.w[k] * half;
            add_node(r * e_up, w * e_up / two_pi_i);
            add_node(r * e_dn, -w * e_dn / two_pi_i);
        }
        r0 = r1;
    }
    return acc;
}

namespace {

bool levels_agree(const std::array<Cplx, 6>& coarse, const std::array<Cplx, 6>& fine,
                  const std::array<double, 6>& l1) {
    for (int k = 0; k < 6; ++k) {
        // relative to the value, or to the quadrature mass where the
        // transform itself passes through zero
        const double scale = std::max({std::abs(fine[k]), 1e-4 * l1[k], 1e-300});
        if (std::abs(fine[k] - coarse[k]) > 1e-7 * scale) return false;
    }
    return true;
}

} // namespace

KernelValues LaplaceKernels::eval_all(double t) const {
    const ContourSpec cs = contour_for(t);

    // exact contributions of the Q zeros the deformation crosses (outside the
    // arc, inside the ray angle); conjugate pairs folded into 2 Re
    std::array<double, 6> res{};
    for (std::size_t j = 0; j < poles_.size(); ++j) {
        const Cplx s = poles_[j];
        if (!(std::abs(s) > cs.mu) || !(std::arg(s) < cs.theta)) continue;
        const Cplx pa1 = principal_pow(s, orders_.alpha1());
        const Cplx pa2 = principal_pow(s, orders_.alpha2());
        const Cplx pl = pa1 * pa2;
        const Cplx pref = std::exp(s * t) / dq_poles_[j];
        const Cplx contrib[6] = {
            pref * pl / s,  pref * pa2 / s, pref * pa1 / s, pref * pa2, pref * pa1,
            pref * (triple_.a * pa2 + triple_.b * pa1 - pl) / triple_.c,
        };
        for (int k = 0; k < 6; ++k) res[k] += 2.0 * contrib[k].real();
    }
    auto with_res = [&](std::array<Cplx, 6> v) {
        for (int k = 0; k < 6; ++k) v[k] += res[k];
        return v;
    };

    std::array<double, 6> l1_base{}, l1_ref{};
    const auto base = with_res(quadrature(t, cs, 64, 16, 2.0, l1_base));
    auto ref = with_res(quadrature(t, cs, 128, 32, 2.0, l1_ref));
    if (!levels_agree(base, ref, l1_ref)) {
        std::array<double, 6> l1_ref2{};
        auto ref2 = with_res(quadrature(t, cs, 256, 32, std::sqrt(2.0), l1_ref2));
        if (!levels_agree(ref, ref2, l1_ref2)) {
            std::array<double, 6> l1_ref3{};
            const auto ref3 =
                with_res(quadrature(t, cs, 512, 48, std::pow(2.0, 0.25), l1_ref3));
            if (!levels_agree(ref2, ref3, l1_ref3))
                throw QuadratureNotConverged(
                    "kernel quadrature levels disagree beyond 1e-7 relative at t = " +
                    std::to_string(t));
            ref2 = ref3;
            l1_ref2 = l1_ref3;
        }
        ref = ref2;
        l1_ref = l1_ref2;
    }
    KernelValues out;
    double* slot[6] = {&out.r0, &out.r_alpha1, &out.r_alpha2,
                       &out.s_alpha1, &out.s_alpha2, &out.s_l};
    for (int k = 0; k < 6; ++k) {
        const double re = ref[k].real(), im = ref[k].imag();
        if (std::abs(im) > 1e-8 * std::max({std::abs(re), 1e-3 * l1_ref[k], 1e-300}))
            throw QuadratureNotConverged(
                "kernel quadrature violates conjugate symmetry (imaginary residue) at t = " +
                std::to_string(t));
        *slot[k] = re;
    }
    return out;
}

double eval_R(const CharTriple& triple, const FracOrders& orders, RIndex k, double t) {
    return LaplaceKernels(triple, orders).eval_R(k, t);
}

double eval_S(const CharTriple& triple, const FracOrders& orders, SIndex k, double t) {
    return LaplaceKernels(triple, orders).eval_S(k, t);
}

SpecFunCache::SpecFunCache(const CharTriple& triple, const FracOrders& orders, double t_max,
                           int nodes)
    : kernels_(triple, orders) {
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw ValidationError("SpecFunCache: t_max must be positive and finite");
    if (nodes < 16) nodes = 16;
    t_max_ = std::max(t_max, 1.0);
    tau_min_ = std::pow(2.0, -24);
    const double a1 = orders.alpha1(), a2 = orders.alpha2();
    lambda_ = {0.0, a1, a2};
    beta_ = {a1, a2, orders.l()};
    for (int k = 0; k < 3; ++k) {
        r_head_[k] = {1.0 / std::tgamma(lambda_[k] + 1.0),
                      triple.a / std::tgamma(lambda_[k] + a1 + 1.0),
                      triple.b / std::tgamma(lambda_[k] + a2 + 1.0)};
        s_head_[k] = {1.0 / std::tgamma(beta_[k]), triple.a / std::tgamma(beta_[k] + a1),
                      triple.b / std::tgamma(beta_[k] + a2)};
    }

    const std::size_t n = static_cast<std::size_t>(nodes);
    std::vector<double> lnt(n);
    const double lo = std::log(tau_min_), hi = std::log(t_max_);
    for (std::size_t i = 0; i < n; ++i)
        lnt[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);

    std::vector<std::array<double, 6>> vals(n);
    detail::parallel_for(n, [&](std::size_t i) {
        const KernelValues kv = kernels_.eval_all(std::exp(lnt[i]));
        vals[i] = {kv.r0, kv.r_alpha1, kv.r_alpha2, kv.s_alpha1, kv.s_alpha2, kv.s_l};
    });

    for (int k = 0; k < 3; ++k) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = vals[i][k];
        r_tab_[k] = detail::Pchip(lnt, std::move(y));
        // store the smooth factor of S: S(t) * t^{1-beta} tends to the
        // power-law coefficient K at the origin
        std::vector<double> ys(n);
        for (std::size_t i = 0; i < n; ++i)
            ys[i] = vals[i][3 + k] * std::pow(std::exp(lnt[i]), 1.0 - beta_[k]);
        s_tab_[k] = detail::Pchip(lnt, std::move(ys));
    }
}

double SpecFunCache::R(RIndex k, double t) const {
    if (!(t >= 0.0) || t > t_max_ * (1.0 + 1e-12))
        throw ValidationError("SpecFunCache::R: t outside [0, t_max]");
    const int i = static_cast<int>(k);
    if (t == 0.0) return k == RIndex::Zero ? 1.0 : 0.0;
    if (t < tau_min_) {
        const double a1 = orders().alpha1(), a2 = orders().alpha2();
        return r_head_[i][0] * std::pow(t, lambda_[i]) +
               r_head_[i][1] * std::pow(t, lambda_[i] + a1) +
               r_head_[i][2] * std::pow(t, lambda_[i] + a2);
    }
    return r_tab_[i](std::log(t));
}

double SpecFunCache::S(SIndex k, double t) const {
    if (!(t > 0.0) || t > t_max_ * (1.0 + 1e-12))
        throw ValidationError("SpecFunCache::S: t outside (0, t_max]");
    const int i = static_cast<int>(k);
    if (t < tau_min_) {
        const double a1 = orders().alpha1(), a2 = orders().alpha2();
        return std::pow(t, beta_[i] - 1.0) *
               (s_head_[i][0] + s_head_[i][1] * std::pow(t, a1) +
                s_head_[i][2] * std::pow(t, a2));
    }
    return s_tab_[i](std::log(t)) * std::pow(t, beta_[i] - 1.0);
}

std::array<double, 3> SpecFunCache::origin_series(SIndex k) const {
    return s_head_[static_cast<int>(k)];
}

namespace {

// Accumulate int_{x0}^{x1} S(tau) dtau into g0 and the same integral weighted
// by (tau - a)/h into g1.  The substitution v = tau^beta makes the origin
// power law a constant density, so geometric Gauss panels in v resolve both
// the singular head (x0 near tau_min) and the smooth bulk.
void integrate_S_panel(const SpecFunCache& cache, SIndex k, double beta, double a,
                       double h, double x0, double x1, double& g0, double& g1) {
    const auto& rule = detail::gauss_legendre(16);
    const double v_hi = std::pow(x1, beta);
    double lo = std::pow(x0, beta);
    while (lo < v_hi) {
        const double hi = std::min(2.0 * lo, v_hi);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 16; ++i) {
            const double v = mid + half * rule.x[i];
            const double tau = std::pow(v, 1.0 / beta);
            // dtau = tau^{1-beta} dv / beta
            const double w =
                rule.w[i] * half * cache.S(k, tau) * std::pow(tau, 1.0 - beta) / beta;
            g0 += w;
            g1 += w * (tau - a) / h;
        }
        lo = hi;
    }
}

} // namespace

ConvWeights& ConvWeights::axpy(double c, const ConvWeights& other) {
    if (other.w0.size() != w0.size() || other.w1.size() != w1.size())
        throw ValidationError("ConvWeights::axpy: panel counts differ");
    for (std::size_t j = 0; j < w0.size(); ++j) {
        w0[j] += c * other.w0[j];
        w1[j] += c * other.w1[j];
    }
    return *this;
}

ConvWeights kernel_weights(const SpecFunCache& cache, SIndex k, double h,
                           std::size_t panels) {
    if (!(h > 0.0) || panels == 0)
        throw ValidationError("kernel_weights: need h > 0 and at least one panel");
    if (h * static_cast<double>(panels) > cache.t_max() * (1.0 + 1e-12))
        throw ValidationError("kernel_weights: grid extends past the cache range");
    const double beta = index_exponent(k, cache.orders());
    ConvWeights w;
    w.w0.assign(panels, 0.0);
    w.w1.assign(panels, 0.0);
    // origin panel: below the cache's first grid point S follows its origin
    // series, whose moments are closed-form power integrals
    const double cut = std::min(h, cache.tau_min());
    const std::array<double, 3> head = cache.origin_series(k);
    const std::array<double, 3> expo = {beta, beta + cache.orders().alpha1(),
                                        beta + cache.orders().alpha2()};
    for (int i = 0; i < 3; ++i) {
        w.w0[0] += head[i] * std::pow(cut, expo[i]) / expo[i];
        w.w1[0] += head[i] * std::pow(cut, expo[i] + 1.0) / ((expo[i] + 1.0) * h);
    }
    if (h > cut) integrate_S_panel(cache, k, beta, 0.0, h, cut, h, w.w0[0], w.w1[0]);
    detail::parallel_for(panels - 1, [&](std::size_t idx) {
        const std::size_t j = idx + 1;
        const double x0 = h * static_cast<double>(j);
        integrate_S_panel(cache, k, beta, x0, h, x0, x0 + h, w.w0[j], w.w1[j]);
    });
    return w;
}

std::vector<double> convolve_weights(const ConvWeights& w, const std::vector<double>& f) {
    if (f.empty()) throw ValidationError("convolve_weights: empty sample vector");
    const std::size_t n = f.size() - 1;
    if (w.w1.size() != w.w0.size() || w.w0.size() < n)
        throw ValidationError("convolve_weights: need weights for every panel");
    std::vector<double> out(n + 1, 0.0);
    if (n == 0) return out;
    detail::parallel_for(n, [&](std::size_t idx) {
        const std::size_t k = idx + 1;
        double acc = 0.0;
        // panel j covers lags [jh, (j+1)h]; f is linear between samples
        for (std::size_t j = 0; j < k; ++j)
            acc += f[k - j] * (w.w0[j] - w.w1[j]) + f[k - j - 1] * w.w1[j];
        out[k] = acc;
    });
    return out;
}

std::vector<double> convolve_S(const SpecFunCache& cache, SIndex k,
                               const std::function<double(double)>& f, double h,
                               std::size_t steps) {
    if (!(h > 0.0) || steps == 0)
        throw ValidationError("convolve_S: need h > 0 and at least one step");
    if (h * static_cast<double>(steps) > cache.t_max() * (1.0 + 1e-12))
        throw ValidationError("convolve_S: grid extends past the cache range");

    auto run = [&](double hh, std::size_t nn) {
        std::vector<double> fv(nn + 1);
        for (std::size_t j = 0; j <= nn; ++j) fv[j] = f(hh * static_cast<double>(j));
        return convolve_weights(kernel_weights(cache, k, hh, nn), fv);
    };
    const auto coarse = run(h, steps);
    const auto fine = run(0.5 * h, 2 * steps);

    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j <= steps; ++j) {
        err = std::max(err, std::abs(coarse[j] - fine[2 * j]));
        scale = std::max(scale, std::abs(fine[2 * j]));
    }
    if (err > 1e-3 * std::max(scale, 1e-12))
        throw QuadratureNotConverged("convolution h/2 refinement disagrees beyond 1e-3 relative");

    std::vector<double> out(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) out[j] = fine[2 * j];
    return out;
}

std::vector<double> convolve_S_samples(const SpecFunCache& cache, SIndex k,
                                       const std::vector<double>& f, double h) {
    if (!(h > 0.0) || f.empty()) throw ValidationError("convolve_S_samples: bad grid");
    const std::size_t n = f.size() - 1;
    if (h * static_cast<double>(n) > cache.t_max() * (1.0 + 1e-12))
        throw ValidationError("convolve_S_samples: grid extends past the cache range");
    return convolve_weights(kernel_weights(cache, k, h, n), f);
}

Trajectory linear_voc_solution(const PlanarSystem& system, Vec2 x0, double h, double t_end) {
    const PlanarSystem sys = validate(system);
    if (!sys.is_linear())
        throw ValidationError("linear_voc_solution requires a linear system");
    if (!(h > 0.0) || !(t_end >= h))
        throw ValidationError("linear_voc_solution requires h > 0 and t_end >= h");

    const std::size_t n = static_cast<std::size_t>(std::llround(t_end / h));
    const CharTriple triple = char_coeffs(sys);
    const SpecFunCache cache(triple, sys.orders, static_cast<double>(n) * h);
    const Mat2& A = sys.A;

    std::vector<double> c11, cl1, cl2, c22;
    if (sys.forcing.present()) {
        std::vector<double> f1(n + 1), f2(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            const Vec2 fv = sys.forcing(h * static_cast<double>(j));
            f1[j] = fv.x1;
            f2[j] = fv.x2;
        }
        auto w_c1 = kernel_weights(cache, SIndex::Alpha1, h, n);
        auto w_c2 = kernel_weights(cache, SIndex::Alpha2, h, n);
        const auto w_sl = kernel_weights(cache, SIndex::L, h, n);
        w_c1.axpy(-A.a22, w_sl);
        w_c2.axpy(-A.a11, w_sl);
        c11 = convolve_weights(w_c1, f1); // (S^{a1} - a22 S^l) * f1
        cl1 = convolve_weights(w_sl, f1); //  S^l * f1
        cl2 = convolve_weights(w_sl, f2); //  S^l * f2
        c22 = convolve_weights(w_c2, f2); // (S^{a2} - a11 S^l) * f2
    } else {
        c11.assign(n + 1, 0.0);
        cl1 = cl2 = c22 = c11;
    }

    Trajectory traj;
    traj.t0 = 0.0;
    traj.h = h;
    traj.method = SolveMethod::VariationOfConstants;
    traj.samples.resize(n + 1);
    traj.samples[0] = x0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = h * static_cast<double>(k);
        const double r0 = cache.R(RIndex::Zero, t);
        const double ra1 = cache.R(RIndex::Alpha1, t);
        const double ra2 = cache.R(RIndex::Alpha2, t);
        traj.samples[k] = {
            (r0 - A.a22 * ra2) * x0.x1 + A.a12 * ra1 * x0.x2 + c11[k] + A.a12 * cl2[k],
            A.a21 * ra2 * x0.x1 + (r0 - A.a11 * ra1) * x0.x2 + A.a21 * cl1[k] + c22[k],
        };
    }
    return traj;
}

namespace {

// zeros of S(k, .) on [tau_min, t_hi]: bracket sign changes on a log grid and
// bisect.  |S| has a corner at each zero, so integration panels must break
// there or Gauss refinement stalls.
std::vector<double> kernel_sign_changes(const SpecFunCache& cache, SIndex k, double t_hi) {
    std::vector<double> zeros;
    const int m = 4096;
    const double lo = std::log(cache.tau_min()), hi = std::log(t_hi);
    double x_prev = cache.tau_min();
    double s_prev = cache.S(k, x_prev);
    for (int i = 1; i <= m; ++i) {
        const double x = std::min(std::exp(lo + (hi - lo) * i / m), t_hi);
        const double s = cache.S(k, x);
        if ((s_prev < 0.0) != (s < 0.0)) {
            double a = x_prev, b = x;
            while (b - a > 1e-15 * b) {
                const double c = 0.5 * (a + b);
                ((cache.S(k, c) < 0.0) == (s_prev < 0.0) ? a : b) = c;
            }
            zeros.push_back(0.5 * (a + b));
        }
        x_prev = x;
        s_prev = s;
    }
    return zeros;
}

} // namespace

double compute_M_beta(const SpecFunCache& cache, SIndex k, double t_max) {
    const FracOrders& ord = cache.orders();
    const double nu = ord.nu();
    if (!(nu < 1.0)) throw ValidationError("compute_M_beta requires alpha1 < 1");
    if (t_max > cache.t_max() * (1.0 + 1e-12))
        throw ValidationError("compute_M_beta: t_max exceeds the cache range");
    const double beta = index_exponent(k, ord);
    const std::vector<double> zeros = kernel_sign_changes(cache, k, t_max);

    // int_0^t |S(x)| (t-x)^{-nu} dx with geometric grading toward both
    // integrable singularities (x = 0 and x = t), panels broken at the sign
    // changes of S
    auto integral = [&](double t, int g) {
        const auto& rule = detail::gauss_legendre(g);
        double total = 0.0;
        const double floor = 1e-12 * t;
        auto piece = [&](double lo, double hi) {
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int i = 0; i < g; ++i) {
                const double x = mid + half * rule.x[i];
                total += rule.w[i] * half * std::abs(cache.S(k, x)) * std::pow(t - x, -nu);
            }
        };
        auto panel = [&](double lo, double hi) {
            double a = lo;
            for (double z : zeros) {
                if (z <= lo) continue;
                if (z >= hi) break;
                piece(a, z);
                a = z;
            }
            piece(a, hi);
        };
        double hi = 0.5 * t;
        while (hi > floor) {
            const double lo = std::max(0.5 * hi, floor);
            panel(lo, hi);
            hi = lo;
        }
        double gap = 0.5 * t;
        while (gap > floor) {
            const double next = std::max(0.5 * gap, floor);
            panel(t - gap, t - next);
            gap = next;
        }
        // closed-form stubs below the grading floor
        total += std::abs(cache.S(k, t)) * std::pow(floor, 1.0 - nu) / (1.0 - nu);
        total += std::abs(cache.S(k, floor)) * (floor / beta) * std::pow(t, -nu);
        return total;
    };

    double sup = 0.0;
    for (double t = 1.0; t <= t_max * (1.0 + 1e-12); t *= 2.0) {
        const double c16 = integral(t, 16);
        const double c32 = integral(t, 32);
        if (std::abs(c32 - c16) > 1e-3 * std::max(std::abs(c32), 1e-12))
            throw QuadratureNotConverged("M_beta quadrature refinement disagrees beyond 1e-3");
        sup = std::max(sup, std::pow(t, nu) * c32);
    }
    return sup;
}

double compute_M_beta(const CharTriple& triple, const FracOrders& orders, SIndex k,
                      double t_max) {
    const SpecFunCache cache(triple, orders, t_max);
    return compute_M_beta(cache, k, t_max);
}

} // namespace fracplanar
