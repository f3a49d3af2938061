#include "commcap/randfn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace commcap {

namespace {

constexpr int kMaxTailBits = 8;

}  // namespace

int64_t t_statistic(const SignMatrix& m) {
    const int d = m.dim();
    const int words = (d + 63) / 64;
    // Rows as bit vectors (bit set where the entry is -1); the inner
    // product of two sign rows is then d - 2 * popcount(xor).
    std::vector<uint64_t> rows(static_cast<size_t>(d) * words, 0);
    for (int i = 0; i < d; ++i) {
        const int8_t* src = m.row(i);
        uint64_t* dst = rows.data() + static_cast<size_t>(i) * words;
        for (int y = 0; y < d; ++y) {
            if (src[y] < 0) dst[y >> 6] |= uint64_t{1} << (y & 63);
        }
    }
    int64_t total = 0;
    for (int i = 0; i < d; ++i) {
        const uint64_t* ri = rows.data() + static_cast<size_t>(i) * words;
        for (int j = i + 1; j < d; ++j) {
            const uint64_t* rj = rows.data() + static_cast<size_t>(j) * words;
            int diff = 0;
            for (int w = 0; w < words; ++w) diff += std::popcount(ri[w] ^ rj[w]);
            const int64_t r = d - 2 * diff;
            total += 2 * r * r;  // (i, j) and (j, i)
        }
    }
    return total;
}

double s2_from_t(int n, int64_t t) {
    if (t < 0) throw std::invalid_argument("s2_from_t: negative statistic");
    const double n_cubed = std::ldexp(1.0, 3 * n);  // 2^{3n}, exact for n <= 13
    return 4.0 * n - std::log2(n_cubed + static_cast<double>(t));
}

double theorem2_bound(int n, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("theorem2_bound: delta must be in (0, 1)");
    }
    const double x = std::exp2(delta * n) - 1.0;
    return std::exp(-0.5 * x * x);
}

TailExperimentResult tail_experiment(const TailExperimentConfig& cfg) {
    if (cfg.n < 1 || cfg.n > kMaxTailBits) {
        throw std::invalid_argument("tail_experiment: n must be in [1, " +
                                    std::to_string(kMaxTailBits) + "]");
    }
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
        throw std::invalid_argument("tail_experiment: delta must be in (0, 1)");
    }
    if (cfg.trials < 1) throw std::invalid_argument("tail_experiment: trials must be >= 1");

    const double threshold = (1.0 - cfg.delta) * cfg.n;
    TailExperimentResult result;
    result.trials = cfg.trials;
    result.analytic_bound = theorem2_bound(cfg.n, cfg.delta);

    double sum = 0.0;
    double s2_min = std::numeric_limits<double>::infinity();
    double s2_max = -std::numeric_limits<double>::infinity();
    int count = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const uint64_t fn_seed = cfg.seed ^ static_cast<uint64_t>(trial);
        const BooleanFunction f = make_family(Family::random, cfg.n, fn_seed);
        const double s2 = s2_from_t(cfg.n, t_statistic(sign_matrix(f)));
        if (s2 < threshold) ++count;
        sum += s2;
        s2_min = std::min(s2_min, s2);
        s2_max = std::max(s2_max, s2);
    }
    result.tail_count = count;
    result.empirical_freq = static_cast<double>(count) / cfg.trials;
    result.s2_min = s2_min;
    result.s2_mean = sum / cfg.trials;
    result.s2_max = s2_max;
    return result;
}

}  // namespace commcap
