#pragma once

#include <cstdint>

#include "commcap/boolfn.hpp"

namespace commcap {

// T = sum_{i != j} (row_i . row_j)^2 of the sign matrix: the squared
// off-diagonal mass of R = MM^T.  Exact integer; rows are bit-packed and
// inner products taken by popcount, so bulk trials stay cheap.
int64_t t_statistic(const SignMatrix& m);

// S2 under uniform distributions from the statistic: 4n - log2(2^{3n} + T).
double s2_from_t(int n, int64_t t);

// Tail probability bound for random functions:
//   Pr[S2 < (1 - delta) n] <= exp(-(2^{delta n} - 1)^2 / 2).
// The concentration argument behind it also yields the looser
// 2 exp(...) form; callers that want that factor-2 form just double this.
double theorem2_bound(int n, double delta);

struct TailExperimentConfig {
    int n = 4;          // <= 8 for bulk trials (per-trial cost is O(2^{3n}))
    double delta = 0.5; // in (0, 1)
    int trials = 1000;
    uint64_t seed = 0;
};

struct TailExperimentResult {
    double empirical_freq = 0.0;  // (count of S2 < (1-delta) n) / trials
    double analytic_bound = 0.0;
    double s2_min = 0.0;
    double s2_mean = 0.0;
    double s2_max = 0.0;
    int trials = 0;
    int tail_count = 0;
};

// Samples `trials` independent random functions (trial t uses function
// seed == cfg.seed XOR t) and counts how often S2 falls below
// (1 - delta) n.  Deterministic for a fixed config.
TailExperimentResult tail_experiment(const TailExperimentConfig& cfg);

}  // namespace commcap
