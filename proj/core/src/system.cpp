#include "fracplanar/system.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace fracplanar {

std::string to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::PiTrapezoidal: return "pi-trapezoidal";
        case SolveMethod::VariationOfConstants: return "voc";
        case SolveMethod::Picard: return "picard";
    }
    return "unknown";
}

double paper_forcing(int component_index, double t) {
    if (component_index != 1 && component_index != 2)
        throw std::out_of_range("paper_forcing: component index must be 1 or 2");
    if (t < 1.0) return 1.0;
    return std::pow(t, -2.0 * component_index);
}

Forcing Forcing::paper() {
    Forcing f;
    f.kind_ = Kind::Paper;
    return f;
}

Forcing Forcing::table(std::vector<std::array<double, 3>> rows) {
    if (rows.empty()) throw ValidationError("forcing table must be nonempty");
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (!(rows[i][0] < rows[i + 1][0]))
            throw ValidationError("forcing table times must be strictly increasing");
    for (const auto& r : rows)
        for (double v : r)
            if (!std::isfinite(v)) throw ValidationError("forcing table entries must be finite");
    Forcing f;
    f.kind_ = Kind::Table;
    f.rows_ = std::move(rows);
    return f;
}

Vec2 Forcing::operator()(double t) const {
    switch (kind_) {
        case Kind::None: return {0.0, 0.0};
        case Kind::Paper: return {paper_forcing(1, t), paper_forcing(2, t)};
        case Kind::Table: break;
    }
    if (t <= rows_.front()[0]) return {rows_.front()[1], rows_.front()[2]};
    if (t >= rows_.back()[0]) return {rows_.back()[1], rows_.back()[2]};
    // linear interpolation between the bracketing rows
    std::size_t hi = 1;
    while (rows_[hi][0] < t) ++hi;
    const auto& r0 = rows_[hi - 1];
    const auto& r1 = rows_[hi];
    const double w = (t - r0[0]) / (r1[0] - r0[0]);
    return {r0[1] + w * (r1[1] - r0[1]), r0[2] + w * (r1[2] - r0[2])};
}

namespace {

double eval_terms(const std::vector<NonlinearTerm>& terms, Vec2 x) {
    double acc = 0.0;
    for (const auto& t : terms)
        acc += t.coef * std::pow(x.x1, t.p1) * std::pow(x.x2, t.p2);
    return acc;
}

// d/dx1 and d/dx2 of a term list at x
std::pair<double, double> grad_terms(const std::vector<NonlinearTerm>& terms, Vec2 x) {
    double g1 = 0.0, g2 = 0.0;
    for (const auto& t : terms) {
        if (t.p1 > 0) g1 += t.coef * t.p1 * std::pow(x.x1, t.p1 - 1) * std::pow(x.x2, t.p2);
        if (t.p2 > 0) g2 += t.coef * t.p2 * std::pow(x.x1, t.p1) * std::pow(x.x2, t.p2 - 1);
    }
    return {g1, g2};
}

std::vector<NonlinearTerm> normalize_terms(const std::vector<NonlinearTerm>& terms,
                                           const char* where) {
    std::map<std::pair<int, int>, double> merged;
    for (const auto& t : terms) {
        if (!std::isfinite(t.coef))
            throw ValidationError(std::string("non-finite coefficient in nonlinearity ") + where);
        if (t.p1 < 0 || t.p2 < 0)
            throw ValidationError(std::string("negative power in nonlinearity ") + where);
        if (t.p1 + t.p2 < 2)
            throw NonlinearityViolatesLipschitzAtZero(
                std::string("nonlinearity ") + where +
                " has a term of total degree < 2; constant and linear terms are forbidden");
        merged[{t.p1, t.p2}] += t.coef;
    }
    std::vector<NonlinearTerm> out;
    for (const auto& [pw, coef] : merged)
        if (coef != 0.0) out.push_back({coef, pw.first, pw.second});
    return out;
}

} // namespace

Vec2 Nonlinearity::eval(Vec2 x) const { return {eval_terms(f1_, x), eval_terms(f2_, x)}; }

Mat2 Nonlinearity::jacobian(Vec2 x) const {
    const auto [g11, g12] = grad_terms(f1_, x);
    const auto [g21, g22] = grad_terms(f2_, x);
    return {g11, g12, g21, g22};
}

double Nonlinearity::lipschitz_bound(double r) const {
    // On B(0,r) in the max-norm, |d f_i| <= sum |coef| (p1+p2) r^{p1+p2-1}.
    const auto bound_one = [r](const std::vector<NonlinearTerm>& terms) {
        double acc = 0.0;
        for (const auto& t : terms)
            acc += std::abs(t.coef) * (t.p1 + t.p2) * std::pow(r, t.p1 + t.p2 - 1);
        return acc;
    };
    return std::max(bound_one(f1_), bound_one(f2_));
}

PlanarSystem validate(const PlanarSystem& system) {
    for (double v : {system.A.a11, system.A.a12, system.A.a21, system.A.a22})
        if (!std::isfinite(v)) throw ValidationError("system matrix entries must be finite");
    if (system.forcing.present() && !system.fnl.empty())
        throw ValidationError("a system may carry forcing or a nonlinearity, not both");
    PlanarSystem out = system;
    out.fnl = Nonlinearity(normalize_terms(system.fnl.component(1), "component 1"),
                           normalize_terms(system.fnl.component(2), "component 2"));
    return out;
}

CharTriple char_coeffs(const PlanarSystem& system) {
    return {system.A.a11, system.A.a22, system.A.det()};
}

} // namespace fracplanar
