#include "commcap/capacity.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace commcap {

namespace {

constexpr double kProbSumTol = 1e-9;
constexpr double kNegTol = -1e-10;

}  // namespace

Renyi2Result renyi2_of_spectrum(std::span<const double> p) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : p) {
        if (v < kNegTol) {
            throw std::invalid_argument("renyi2_of_spectrum: negative probability " +
                                        std::to_string(v));
        }
        if (v > 0.0) sum_sq += v * v;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTol) {
        throw std::invalid_argument("renyi2_of_spectrum: probabilities sum to " +
                                    std::to_string(sum));
    }
    return {-std::log2(sum_sq), Renyi2Method::from_spectrum};
}

Renyi2Result renyi2_uniform_fast(const SignMatrix& m) {
    const int d = m.dim();
    // R = MM^T entrywise, accumulating sum R_ij^2 in 64-bit integers.
    // |R_ij| <= 2^n, so the sum is at most 2^{4n} and fits for n <= 13.
    int64_t total = 0;
    for (int i = 0; i < d; ++i) {
        const int8_t* ri = m.row(i);
        for (int j = i; j < d; ++j) {
            const int8_t* rj = m.row(j);
            int64_t r = 0;
            for (int k = 0; k < d; ++k) r += ri[k] * rj[k];
            total += (i == j) ? r * r : 2 * r * r;
        }
    }
    const double s2 = 4.0 * m.n() - std::log2(static_cast<double>(total));
    return {s2, Renyi2Method::uniform_fast};
}

}  // namespace commcap
