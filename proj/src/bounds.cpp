#include "commcap/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace commcap {

namespace {

constexpr double kEntropyTol = 1e-9;
const double kEta0Cap = std::numbers::log2e / std::numbers::e;  // value for x > 1/e
const double kInvE = 1.0 / std::numbers::e;

}  // namespace

std::string_view fannes_variant_name(FannesVariant v) {
    return v == FannesVariant::paper ? "paper" : "conservative";
}

std::string_view provenance_name(DistProvenance p) {
    switch (p) {
        case DistProvenance::uniform: return "uniform";
        case DistProvenance::optimized: return "optimized";
        case DistProvenance::user: return "user";
    }
    return "?";
}

double eta0(double x) {
    if (x < 0.0) throw std::invalid_argument("eta0: negative argument");
    if (x == 0.0) return 0.0;
    if (x > kInvE) return kEta0Cap;
    return -x * std::log2(x);
}

double fannes_penalty(int n, double epsilon, FannesVariant variant) {
    if (epsilon < 0.0) throw std::invalid_argument("fannes_penalty: negative epsilon");
    const double x = 4.0 * std::sqrt(epsilon);
    double raw;
    if (variant == FannesVariant::paper) {
        raw = x * n + std::log2(eta0(x));  // log2(0) = -inf at eps = 0; floored below
    } else {
        raw = x * (n + 1) + eta0(x);
    }
    return std::max(raw, 0.0);
}

RepetitionBound optimized_repetition_bound(double entropy_bits, int n, double epsilon,
                                           FannesVariant variant) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("optimized_repetition_bound: epsilon must be in (0, 1/2)");
    }
    if (entropy_bits < -kEntropyTol || entropy_bits > n + kEntropyTol) {
        throw std::invalid_argument("optimized_repetition_bound: entropy out of [0, n]");
    }
    const int k_max = 10 * std::bit_width(static_cast<unsigned>(n)) + 1;  // 10 ceil(log2(n+1)) + 1
    const double gap_sq = (0.5 - epsilon) * (0.5 - epsilon);
    RepetitionBound best{-std::numeric_limits<double>::infinity(), 1};
    for (int k = 1; k <= k_max; k += 2) {
        const double eps_k = std::exp(-2.0 * k * gap_sq);  // Hoeffding majority-vote error
        const double bound_k = (entropy_bits - fannes_penalty(n, eps_k, variant)) / k;
        if (bound_k > best.bound) best = {bound_k, k};
    }
    return best;
}

BoundReport theorem1_report(double entropy_bits, int n, double epsilon, FannesVariant variant,
                            DistProvenance provenance) {
    if (entropy_bits < -kEntropyTol || entropy_bits > n + kEntropyTol) {
        throw std::invalid_argument("theorem1_report: entropy " + std::to_string(entropy_bits) +
                                    " out of [0, " + std::to_string(n) + "]");
    }
    if (!(epsilon >= 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("theorem1_report: epsilon must be in [0, 1/2)");
    }
    BoundReport r;
    r.entropy_bits = std::clamp(entropy_bits, 0.0, static_cast<double>(n));
    r.n = n;
    r.epsilon = epsilon;
    r.fannes_variant = variant;
    r.distribution_provenance = provenance;
    r.q_exact = r.entropy_bits;
    r.q_exact_ent = 0.5 * r.entropy_bits;
    r.q_eps_fannes = r.entropy_bits - fannes_penalty(n, epsilon, variant);
    r.q_eps_ent_fannes = 0.5 * r.q_eps_fannes;
    if (epsilon > 0.0) {
        const RepetitionBound rep = optimized_repetition_bound(r.entropy_bits, n, epsilon, variant);
        r.q_eps_repeated = rep.bound;
        r.repetition_k = rep.k_star;
    } else {
        // Repetition cannot help an exact protocol; report the direct bound.
        r.q_eps_repeated = r.q_eps_fannes;
        r.repetition_k = 1;
    }
    return r;
}

}  // namespace commcap
