#include "commcap/protocol.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "commcap/rng.hpp"

namespace commcap {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kAlgebraTol = 1e-10;  // residue allowed in registers that must return unchanged
constexpr int kMaxSimBits = 6;

constexpr uint64_t kThetaStream = 0x7468657461ull;
constexpr uint64_t kPhiStream = 0x706869ull;

using cd = std::complex<double>;

void check_sim_n(int n) {
    if (n > kMaxSimBits) {
        throw std::invalid_argument("register simulation supports n <= " +
                                    std::to_string(kMaxSimBits));
    }
}

}  // namespace

PureState::PureState(std::vector<cd> amplitudes, std::vector<Register> layout)
    : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    for (const Register& r : layout_) {
        if (r.width < 0) throw std::invalid_argument("register width must be non-negative");
        qubits_ += r.width;
    }
    if (amplitudes_.size() != (size_t{1} << qubits_)) {
        throw std::invalid_argument("amplitude count does not match register widths");
    }
    double norm_sq = 0.0;
    for (const cd& z : amplitudes_) norm_sq += std::norm(z);
    if (std::abs(std::sqrt(norm_sq) - 1.0) > kNormTol) {
        throw std::invalid_argument("state is not normalized (norm " +
                                    std::to_string(std::sqrt(norm_sq)) + ")");
    }
}

PureState PureState::canonical() const {
    std::vector<cd> amps = amplitudes_;
    for (const cd& z : amps) {
        const double mag = std::abs(z);
        if (mag > 1e-14) {
            const cd phase = std::conj(z) / mag;
            for (cd& w : amps) w *= phase;
            break;
        }
    }
    return PureState(std::move(amps), layout_);
}

double l2_distance(const PureState& lhs, const PureState& rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw std::invalid_argument("l2_distance: dimension mismatch");
    }
    double s = 0.0;
    for (size_t i = 0; i < lhs.dim(); ++i) {
        s += std::norm(lhs.amplitudes()[i] - rhs.amplitudes()[i]);
    }
    return std::sqrt(s);
}

NoisyAnswerModel NoisyAnswerModel::sample(int n, double epsilon, uint64_t seed) {
    if (!(epsilon >= 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("noise epsilon must be in [0, 1/2)");
    }
    const int d = 1 << n;
    NoisyAnswerModel model;
    model.epsilon = epsilon;
    model.seed = seed;
    model.theta = RealMatrix(d);
    model.phi = RealMatrix(d);
    for (int x = 0; x < d; ++x) {
        for (int y = 0; y < d; ++y) {
            const uint64_t counter = (static_cast<uint64_t>(x) << n) | static_cast<uint64_t>(y);
            const double cos_theta =
                1.0 - 2.0 * epsilon * counter_uniform(seed, kThetaStream, counter);
            model.theta(x, y) = std::acos(std::min(cos_theta, 1.0));
            model.phi(x, y) =
                2.0 * std::numbers::pi * counter_uniform(seed, kPhiStream, counter);
        }
    }
    return model;
}

NoisyAnswerModel NoisyAnswerModel::from_angles(double epsilon, RealMatrix theta, RealMatrix phi,
                                               uint64_t seed) {
    if (!(epsilon >= 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("noise epsilon must be in [0, 1/2)");
    }
    if (theta.dim() != phi.dim()) throw std::invalid_argument("theta/phi dimension mismatch");
    const double floor = 1.0 - 2.0 * epsilon;
    for (int x = 0; x < theta.dim(); ++x) {
        for (int y = 0; y < theta.dim(); ++y) {
            const double th = theta(x, y);
            if (th < 0.0 || th > std::numbers::pi / 2 + 1e-12) {
                throw std::invalid_argument("theta must lie in [0, pi/2]");
            }
            if (std::cos(th) < floor - 1e-12) {
                throw std::invalid_argument("cos(theta) must be >= 1 - 2 epsilon");
            }
            const double ph = phi(x, y);
            if (ph < 0.0 || ph >= 2.0 * std::numbers::pi) {
                throw std::invalid_argument("phi must lie in [0, 2 pi)");
            }
        }
    }
    NoisyAnswerModel model;
    model.epsilon = epsilon;
    model.theta = std::move(theta);
    model.phi = std::move(phi);
    model.seed = seed;
    return model;
}

PureState clean_state(const BooleanFunction& f, int x, const SimplexVector& b) {
    const int d = f.dim();
    if (x < 0 || x >= d) throw std::invalid_argument("input index out of range");
    if (b.dim() != d) throw std::invalid_argument("distribution dimension mismatch");
    std::vector<cd> amps(static_cast<size_t>(d));
    for (int y = 0; y < d; ++y) {
        const double sign = f(x, y) ? -1.0 : 1.0;
        amps[static_cast<size_t>(y)] = sign * std::sqrt(b[y]);
    }
    return PureState(std::move(amps), {{"y", f.n()}});
}

PureState simulate_clean_protocol(const BooleanFunction& f, int x, const SimplexVector& b) {
    const int n = f.n();
    check_sim_n(n);
    const int d = f.dim();
    if (x < 0 || x >= d) throw std::invalid_argument("input index out of range");
    if (b.dim() != d) throw std::invalid_argument("distribution dimension mismatch");

    // Registers: y (n qubits), answer qubit, copy qubit; index (y << 2) | (a << 1) | c.
    // The x register stays classical throughout, so it is not materialized.
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    std::vector<cd> amps(size_t{1} << (n + 2), cd{0.0});
    auto at = [&](int y, int a, int c) -> cd& {
        return amps[(static_cast<size_t>(y) << 2) | (static_cast<size_t>(a) << 1) |
                    static_cast<size_t>(c)];
    };
    // (i) |y distribution> |0>_ans (|0> - |1>)/sqrt(2)_copy
    for (int y = 0; y < d; ++y) {
        const double ry = std::sqrt(b[y]);
        at(y, 0, 0) = ry * inv_sqrt2;
        at(y, 0, 1) = -ry * inv_sqrt2;
    }
    // (ii) compute: ans ^= f(x, y)
    for (int y = 0; y < d; ++y) {
        if (f(x, y)) {
            std::swap(at(y, 0, 0), at(y, 1, 0));
            std::swap(at(y, 0, 1), at(y, 1, 1));
        }
    }
    // (iii) copy: c ^= ans
    for (int y = 0; y < d; ++y) {
        std::swap(at(y, 1, 0), at(y, 1, 1));
    }
    // (iv) uncompute: ans ^= f(x, y)
    for (int y = 0; y < d; ++y) {
        if (f(x, y)) {
            std::swap(at(y, 0, 0), at(y, 1, 0));
            std::swap(at(y, 0, 1), at(y, 1, 1));
        }
    }

    // The answer qubit must be back at |0> and the copy qubit still at
    // (|0> - |1>)/sqrt(2); only then is reducing to the y register sound.
    std::vector<cd> reduced(static_cast<size_t>(d));
    for (int y = 0; y < d; ++y) {
        if (std::abs(at(y, 1, 0)) > kAlgebraTol || std::abs(at(y, 1, 1)) > kAlgebraTol) {
            throw std::logic_error("clean protocol left residue in the answer register");
        }
        if (std::abs(at(y, 0, 1) + at(y, 0, 0)) > kAlgebraTol) {
            throw std::logic_error("clean protocol disturbed the copy qubit");
        }
        reduced[static_cast<size_t>(y)] = at(y, 0, 0) * std::numbers::sqrt2;
    }
    return PureState(std::move(reduced), {{"y", n}});
}

std::vector<PureState> sample_noisy_states(const BooleanFunction& f, const SimplexVector& b,
                                           const NoisyAnswerModel& model) {
    const int d = f.dim();
    if (b.dim() != d || model.theta.dim() != d || model.phi.dim() != d) {
        throw std::invalid_argument("sample_noisy_states: dimension mismatch");
    }
    const double floor = 1.0 - 2.0 * model.epsilon;
    std::vector<PureState> states;
    states.reserve(static_cast<size_t>(d));
    for (int x = 0; x < d; ++x) {
        std::vector<cd> amps(static_cast<size_t>(d) * 2);
        for (int y = 0; y < d; ++y) {
            const double th = model.theta(x, y);
            const double cos_th = std::cos(th);
            if (cos_th < floor - 1e-12) {
                throw std::invalid_argument("model violates cos(theta) >= 1 - 2 epsilon");
            }
            const double ry = std::sqrt(b[y]);
            const double sign = f(x, y) ? -1.0 : 1.0;
            amps[static_cast<size_t>(y) * 2] = sign * ry * cos_th;
            amps[static_cast<size_t>(y) * 2 + 1] =
                ry * std::sin(th) * std::polar(1.0, model.phi(x, y));
        }
        states.emplace_back(std::move(amps), std::vector<Register>{{"y", f.n()}, {"answer", 1}});
    }
    return states;
}

FidelityCheck state_fidelity_check(const PureState& clean, const PureState& noisy,
                                   double epsilon) {
    if (noisy.dim() != clean.dim() * 2) {
        throw std::invalid_argument("state_fidelity_check: noisy state must carry one more qubit");
    }
    // <clean, 0 | noisy>: the clean state is padded with |0> on the answer qubit.
    cd overlap{0.0};
    for (size_t y = 0; y < clean.dim(); ++y) {
        overlap += std::conj(clean.amplitudes()[y]) * noisy.amplitudes()[y * 2];
    }
    FidelityCheck out;
    out.fidelity_sq = std::norm(overlap);
    const double floor = (1.0 - 2.0 * epsilon) * (1.0 - 2.0 * epsilon);
    out.pass = out.fidelity_sq >= floor - 1e-12;
    return out;
}

namespace {

void accumulate_projector(ComplexMatrix& rho, const std::vector<cd>& psi, double weight) {
    const int dim = static_cast<int>(psi.size());
    for (int i = 0; i < dim; ++i) {
        const cd wi = weight * psi[static_cast<size_t>(i)];
        for (int j = 0; j < dim; ++j) {
            rho(i, j) += wi * std::conj(psi[static_cast<size_t>(j)]);
        }
    }
}

}  // namespace

EnsembleReport ensemble_trace_distance(const BooleanFunction& f, const SimplexVector& a,
                                       const SimplexVector& b, const NoisyAnswerModel& model) {
    const int n = f.n();
    check_sim_n(n);
    const int d = f.dim();
    if (a.dim() != d) throw std::invalid_argument("distribution dimension mismatch");
    const int dim = 2 * d;  // y register plus answer qubit

    const std::vector<PureState> noisy = sample_noisy_states(f, b, model);
    ComplexMatrix rho_clean(dim), rho_noisy(dim);
    double min_fidelity_sq = 1.0;
    for (int x = 0; x < d; ++x) {
        const PureState clean = clean_state(f, x, b);
        std::vector<cd> padded(static_cast<size_t>(dim), cd{0.0});
        for (int y = 0; y < d; ++y) {
            padded[static_cast<size_t>(y) * 2] = clean.amplitudes()[static_cast<size_t>(y)];
        }
        accumulate_projector(rho_clean, padded, a[x]);
        accumulate_projector(rho_noisy, noisy[static_cast<size_t>(x)].amplitudes(), a[x]);
        const FidelityCheck fc = state_fidelity_check(clean, noisy[static_cast<size_t>(x)],
                                                      model.epsilon);
        min_fidelity_sq = std::min(min_fidelity_sq, fc.fidelity_sq);
    }

    EnsembleReport report;
    report.min_fidelity_sq = min_fidelity_sq;
    report.s_clean = shannon_entropy(hermitian_spectrum(rho_clean));
    report.s_noisy = shannon_entropy(hermitian_spectrum(rho_noisy));

    ComplexMatrix delta(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) delta(i, j) = rho_clean(i, j) - rho_noisy(i, j);
    }
    double trace = 0.0;
    for (double lambda : hermitian_eigenvalues(delta)) trace += std::abs(lambda);
    report.trace_distance = trace;

    assert(report.trace_distance <= 4.0 * std::sqrt(model.epsilon) + 1e-9);
    return report;
}

double clean_ensemble_entropy(const BooleanFunction& f, const SimplexVector& a,
                              const SimplexVector& b) {
    check_sim_n(f.n());
    const int d = f.dim();
    if (a.dim() != d || b.dim() != d) throw std::invalid_argument("dimension mismatch");
    ComplexMatrix rho(d);
    for (int x = 0; x < d; ++x) {
        accumulate_projector(rho, clean_state(f, x, b).amplitudes(), a[x]);
    }
    return shannon_entropy(hermitian_spectrum(rho));
}

}  // namespace commcap
