#pragma once

#include <cstdint>
#include <vector>

#include "commcap/boolfn.hpp"
#include "commcap/spectral.hpp"

namespace commcap {

struct OptimizerConfig {
    int max_iters = 500;
    double step_init = 0.1;
    double tol = 1e-7;     // stop a start when the entropy gain per iteration drops below
    int restarts = 4;      // Dirichlet(1) starts on top of the uniform one
    uint64_t seed = 1;
    double fd_step = 1e-5;
};

struct OptimizerResult {
    SimplexVector a;
    SimplexVector b;
    double entropy_bits = 0.0;
    int iterations_used = 0;
    int start_index = 0;  // 0 = uniform start
};

// Finite-difference gradient of the capacity entropy along simplex-tangent
// directions: weight i moves by +-h while the remaining mass is rebalanced
// proportionally, and the result is centred so it has no component along
// the all-ones direction.  Both inputs must be strictly interior (every
// weight >= 1e-9); callers pre-smooth their iterates.
struct SimplexGradient {
    std::vector<double> grad_a;
    std::vector<double> grad_b;
};
SimplexGradient entropy_gradient(const SignMatrix& m, const SimplexVector& a,
                                 const SimplexVector& b, double fd_step);

// Multiplicative-weights ascent (w_i <- w_i exp(eta g_i), renormalize)
// with backtracking halving of eta, run from the uniform start plus
// cfg.restarts seeded Dirichlet(1) starts.  Best entropy wins; ties go
// to the lowest start index.  Any returned (a, b) is a valid bound
// witness whether or not it is the true maximum.
OptimizerResult optimize_distributions(const SignMatrix& m, const OptimizerConfig& cfg);

}  // namespace commcap
