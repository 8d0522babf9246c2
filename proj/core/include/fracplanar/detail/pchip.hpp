#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fracplanar::detail {

// Fritsch-Carlson shape-preserving cubic Hermite interpolant.  Queries
// outside [x.front(), x.back()] are clamped to the boundary values.
class Pchip {
public:
    Pchip() = default;

    Pchip(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("Pchip: need at least two matching nodes");
        for (std::size_t k = 0; k + 1 < n; ++k)
            if (!(x_[k] < x_[k + 1]))
                throw std::invalid_argument("Pchip: abscissae must be strictly increasing");

        std::vector<double> h(n - 1), del(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = x_[k + 1] - x_[k];
            del[k] = (y_[k + 1] - y_[k]) / h[k];
        }
        d_.assign(n, 0.0);
        if (n == 2) {
            d_[0] = d_[1] = del[0];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (del[k - 1] * del[k] <= 0.0) continue; // keep 0 at local extrema
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            d_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
        d_[0] = edge_slope(h[0], h[1], del[0], del[1]);
        d_[n - 1] = edge_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }

    double operator()(double xq) const {
        if (xq <= x_.front()) return y_.front();
        if (xq >= x_.back()) return y_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
        const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[k + 1] - x_[k];
        const double u = (xq - x_[k]) / h;
        const double u2 = u * u, um = 1.0 - u;
        return y_[k] * (1.0 + 2.0 * u) * um * um + d_[k] * h * u * um * um +
               y_[k + 1] * u2 * (3.0 - 2.0 * u) + d_[k + 1] * h * u2 * (u - 1.0);
    }

    bool empty() const { return x_.empty(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    // three-point end slope, limited so the interpolant stays shape-preserving
    static double edge_slope(double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return d;
    }

    std::vector<double> x_, y_, d_;
};

} // namespace fracplanar::detail
