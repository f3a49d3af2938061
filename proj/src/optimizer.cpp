#include "commcap/optimizer.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "commcap/rng.hpp"

namespace commcap {

namespace {

constexpr double kInteriorFloor = 1e-9;  // gradient precondition
constexpr double kIterateFloor = 1e-12;  // keeps coordinates alive across updates
constexpr int kMaxHalvings = 40;

constexpr uint64_t kDirichletStreamA = 0x646972612dull;
constexpr uint64_t kDirichletStreamB = 0x646972622dull;

double objective(const SignMatrix& m, const SimplexVector& a, const SimplexVector& b) {
    return capacity_entropy(m, a, b).entropy_bits;
}

// Move weight i by `step` (can be negative) and spread the compensating
// mass proportionally over the other coordinates.
std::vector<double> nudged(const std::vector<double>& w, int i, double step) {
    std::vector<double> out(w);
    const double wi = w[static_cast<size_t>(i)];
    const double scale = (1.0 - wi - step) / (1.0 - wi);
    for (double& v : out) v *= scale;
    out[static_cast<size_t>(i)] = wi + step;
    return out;
}

void check_interior(const SimplexVector& v, const char* side) {
    for (int i = 0; i < v.dim(); ++i) {
        if (v[i] < kInteriorFloor) {
            throw std::invalid_argument(std::string("entropy_gradient: ") + side +
                                        " is not strictly interior");
        }
    }
}

// Central difference along simplex-tangent directions, then centred so the
// gradient has no component along the all-ones direction (the objective is
// only defined on the simplex, so that component is meaningless anyway).
std::vector<double> side_gradient(const std::vector<double>& w, double fd_step,
                                  const std::function<double(const std::vector<double>&)>& eval) {
    const int dim = static_cast<int>(w.size());
    std::vector<double> grad(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double wi = w[static_cast<size_t>(i)];
        // Shrink the step near the boundary so both probes stay inside.
        const double h = std::min({fd_step, wi / 2.0, (1.0 - wi) / 2.0});
        const double up = eval(nudged(w, i, h));
        const double down = eval(nudged(w, i, -h));
        grad[static_cast<size_t>(i)] = (up - down) / (2.0 * h);
    }
    double mean = 0.0;
    for (double g : grad) mean += g;
    mean /= dim;
    for (double& g : grad) g -= mean;
    return grad;
}

SimplexVector dirichlet_start(int dim, uint64_t seed, uint64_t stream, int start) {
    std::vector<double> w(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const uint64_t counter =
            static_cast<uint64_t>(start) * static_cast<uint64_t>(dim) + static_cast<uint64_t>(i);
        const double u = counter_uniform(seed, stream, counter);
        w[static_cast<size_t>(i)] = -std::log1p(-std::min(u, 1.0 - 1e-16));
    }
    return SimplexVector::normalized(std::move(w));
}

SimplexVector floored(const std::vector<double>& w, double floor) {
    std::vector<double> out(w);
    for (double& v : out) v = std::max(v, floor);
    return SimplexVector::normalized(std::move(out));
}

struct StartOutcome {
    SimplexVector a;
    SimplexVector b;
    double entropy = 0.0;
    int iterations = 0;
};

StartOutcome run_start(const SignMatrix& m, SimplexVector a, SimplexVector b,
                       const OptimizerConfig& cfg) {
    double current = objective(m, a, b);
    int iters = 0;
    for (; iters < cfg.max_iters; ++iters) {
        const SimplexVector sa = floored(a.weights(), kInteriorFloor);
        const SimplexVector sb = floored(b.weights(), kInteriorFloor);
        const SimplexGradient grad = entropy_gradient(m, sa, sb, cfg.fd_step);

        double eta = cfg.step_init;
        bool accepted = false;
        SimplexVector next_a = a;
        SimplexVector next_b = b;
        double next_value = current;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            std::vector<double> wa = sa.weights();
            std::vector<double> wb = sb.weights();
            for (int i = 0; i < static_cast<int>(wa.size()); ++i) {
                wa[static_cast<size_t>(i)] *= std::exp(eta * grad.grad_a[static_cast<size_t>(i)]);
            }
            for (int i = 0; i < static_cast<int>(wb.size()); ++i) {
                wb[static_cast<size_t>(i)] *= std::exp(eta * grad.grad_b[static_cast<size_t>(i)]);
            }
            SimplexVector ta = floored(SimplexVector::normalized(std::move(wa)).weights(),
                                       kIterateFloor);
            SimplexVector tb = floored(SimplexVector::normalized(std::move(wb)).weights(),
                                       kIterateFloor);
            const double value = objective(m, ta, tb);
            if (value >= current) {
                next_a = std::move(ta);
                next_b = std::move(tb);
                next_value = value;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            ++iters;
            break;
        }
        const double gain = next_value - current;
        assert(gain >= 0.0);  // accepted iterates never decrease the objective
        a = std::move(next_a);
        b = std::move(next_b);
        current = next_value;
        if (gain < cfg.tol) {
            ++iters;
            break;
        }
    }
    return {std::move(a), std::move(b), current, iters};
}

}  // namespace

SimplexGradient entropy_gradient(const SignMatrix& m, const SimplexVector& a,
                                 const SimplexVector& b, double fd_step) {
    if (!(fd_step > 0.0)) throw std::invalid_argument("entropy_gradient: fd_step must be > 0");
    if (a.dim() != m.dim() || b.dim() != m.dim()) {
        throw std::invalid_argument("entropy_gradient: dimension mismatch");
    }
    check_interior(a, "a");
    check_interior(b, "b");
    SimplexGradient out;
    out.grad_a = side_gradient(a.weights(), fd_step, [&](const std::vector<double>& wa) {
        return objective(m, SimplexVector::normalized(wa), b);
    });
    out.grad_b = side_gradient(b.weights(), fd_step, [&](const std::vector<double>& wb) {
        return objective(m, a, SimplexVector::normalized(wb));
    });
    return out;
}

OptimizerResult optimize_distributions(const SignMatrix& m, const OptimizerConfig& cfg) {
    if (cfg.max_iters < 1 || cfg.restarts < 0 || !(cfg.step_init > 0.0) || !(cfg.tol > 0.0) ||
        !(cfg.fd_step > 0.0)) {
        throw std::invalid_argument("optimize_distributions: invalid config");
    }
    const int d = m.dim();

    OptimizerResult best{SimplexVector::uniform(d), SimplexVector::uniform(d), -1.0, 0, 0};
    for (int start = 0; start <= cfg.restarts; ++start) {
        SimplexVector a0 = start == 0 ? SimplexVector::uniform(d)
                                      : dirichlet_start(d, cfg.seed, kDirichletStreamA, start);
        SimplexVector b0 = start == 0 ? SimplexVector::uniform(d)
                                      : dirichlet_start(d, cfg.seed, kDirichletStreamB, start);
        StartOutcome outcome = run_start(m, std::move(a0), std::move(b0), cfg);
        if (outcome.entropy > best.entropy_bits) {
            best = {std::move(outcome.a), std::move(outcome.b), outcome.entropy,
                    outcome.iterations, start};
        }
    }
    // The witness must stand on its own: recompute the entropy it reports.
    best.entropy_bits = objective(m, best.a, best.b);
    return best;
}

}  // namespace commcap
