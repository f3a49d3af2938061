#pragma once

// Independent oracles used by the unit and acceptance suites.  Everything
// here deliberately avoids the library's own computation paths: spectra go
// through Eigen's SVD of the rescaled matrix itself, the quartic sign sum
// is the literal four-index loop, and the gradient oracle uses a
// higher-order stencil.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "commcap/boolfn.hpp"
#include "commcap/optimizer.hpp"
#include "commcap/rng.hpp"
#include "commcap/spectral.hpp"

namespace commcap::testsupport {

// Squared singular values of A M B (descending), via Eigen.
inline std::vector<double> svd_sigma_sq(const SignMatrix& m, const SimplexVector& a,
                                        const SimplexVector& b) {
    const int d = m.dim();
    Eigen::MatrixXd amb(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            amb(i, j) = std::sqrt(a[i]) * m.entry(i, j) * std::sqrt(b[j]);
        }
    }
    Eigen::VectorXd sv;
    if (d >= 64) {
        sv = Eigen::BDCSVD<Eigen::MatrixXd>(amb).singularValues();
    } else {
        sv = Eigen::JacobiSVD<Eigen::MatrixXd>(amb).singularValues();
    }
    std::vector<double> out(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = sv(i) * sv(i);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline double svd_entropy_bits(const SignMatrix& m, const SimplexVector& a,
                               const SimplexVector& b) {
    double h = 0.0;
    for (double p : svd_sigma_sq(m, a, b)) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

// The literal sum_{i,j,k,l} M_ik M_jk M_il M_jl; O(2^{4n}), n <= 3 territory.
inline int64_t quartic_sign_sum(const SignMatrix& m) {
    const int d = m.dim();
    int64_t total = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    total += m.entry(i, k) * m.entry(j, k) * m.entry(i, l) * m.entry(j, l);
    return total;
}

// Same simplex-tangent directions as entropy_gradient (nudge one weight,
// rebalance the rest proportionally, centre the result), but with a
// 5-point stencil: an O(h^4) check on the O(h^2) implementation.
inline std::vector<double> five_point_side_gradient(
    const std::vector<double>& w, double h0,
    const std::function<double(const std::vector<double>&)>& eval) {
    const int dim = static_cast<int>(w.size());
    auto nudged = [&](int i, double step) {
        std::vector<double> out(w);
        const double wi = w[static_cast<size_t>(i)];
        const double scale = (1.0 - wi - step) / (1.0 - wi);
        for (double& v : out) v *= scale;
        out[static_cast<size_t>(i)] = wi + step;
        return out;
    };
    std::vector<double> grad(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double wi = w[static_cast<size_t>(i)];
        const double h = std::min({h0, wi / 4.0, (1.0 - wi) / 4.0});
        const double f1 = eval(nudged(i, 2.0 * h));
        const double f2 = eval(nudged(i, h));
        const double f3 = eval(nudged(i, -h));
        const double f4 = eval(nudged(i, -2.0 * h));
        grad[static_cast<size_t>(i)] = (-f1 + 8.0 * f2 - 8.0 * f3 + f4) / (12.0 * h);
    }
    double mean = 0.0;
    for (double g : grad) mean += g;
    mean /= dim;
    for (double& g : grad) g -= mean;
    return grad;
}

inline SimplexGradient five_point_gradient(const SignMatrix& m, const SimplexVector& a,
                                           const SimplexVector& b, double h) {
    auto entropy = [&](const SimplexVector& va, const SimplexVector& vb) {
        return capacity_entropy(m, va, vb).entropy_bits;
    };
    SimplexGradient out;
    out.grad_a = five_point_side_gradient(a.weights(), h, [&](const std::vector<double>& wa) {
        return entropy(SimplexVector::normalized(wa), b);
    });
    out.grad_b = five_point_side_gradient(b.weights(), h, [&](const std::vector<double>& wb) {
        return entropy(a, SimplexVector::normalized(wb));
    });
    return out;
}

// Dirichlet(1) point of the simplex from the counter generator.
inline SimplexVector random_simplex(int dim, uint64_t seed, uint64_t stream) {
    std::vector<double> w(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double u = counter_uniform(seed, stream, static_cast<uint64_t>(i));
        w[static_cast<size_t>(i)] = -std::log1p(-std::min(u, 1.0 - 1e-16));
    }
    return SimplexVector::normalized(std::move(w));
}

inline double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double linf_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace commcap::testsupport
