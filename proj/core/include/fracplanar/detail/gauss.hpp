#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace fracplanar::detail {

struct GaussRule {
    std::vector<double> x; // nodes, ascending in (-1, 1)
    std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1], computed by Newton iteration on the
// Legendre recurrence and cached per order.
inline const GaussRule& gauss_legendre(int n) {
    static std::mutex guard;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(guard);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

} // namespace fracplanar::detail
