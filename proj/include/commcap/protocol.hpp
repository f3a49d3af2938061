#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "commcap/boolfn.hpp"
#include "commcap/matrix.hpp"
#include "commcap/spectral.hpp"

namespace commcap {

struct Register {
    std::string name;
    int width = 0;  // qubits
};

// Normalized state vector over named registers.  Register 0 is the most
// significant block of the amplitude index.
class PureState {
public:
    // Validates: amplitude count is 2^(total width), l2 norm within 1e-10 of 1.
    PureState(std::vector<std::complex<double>> amplitudes, std::vector<Register> layout);

    int qubits() const { return qubits_; }
    size_t dim() const { return amplitudes_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }
    const std::vector<Register>& layout() const { return layout_; }

    // Physical states are rays: fix the global phase so the first
    // nonzero amplitude is real non-negative.  Needed to compare states
    // produced by different computation paths.
    PureState canonical() const;

private:
    std::vector<std::complex<double>> amplitudes_;
    std::vector<Register> layout_;
    int qubits_ = 0;
};

double l2_distance(const PureState& lhs, const PureState& rhs);

// Answer-qubit noise of a bounded-error protocol: per input pair,
// the answer qubit ends up at (-1)^f cos(theta_xy)|0> + e^{i phi_xy} sin(theta_xy)|1>
// with cos(theta_xy) >= 1 - 2 epsilon.
struct NoisyAnswerModel {
    double epsilon = 0.0;
    RealMatrix theta;  // radians, [0, pi/2]
    RealMatrix phi;    // radians, [0, 2 pi)
    uint64_t seed = 0;

    // cos(theta) uniform on [1 - 2 epsilon, 1], phi uniform on [0, 2 pi),
    // both drawn per (x, y) from the counter generator.
    static NoisyAnswerModel sample(int n, double epsilon, uint64_t seed);
    // Validates user-supplied angles against the invariants.
    static NoisyAnswerModel from_angles(double epsilon, RealMatrix theta, RealMatrix phi,
                                        uint64_t seed = 0);
};

struct EnsembleReport {
    double s_clean = 0.0;        // S(rho'), bits
    double s_noisy = 0.0;        // S(rho^eps), bits
    double trace_distance = 0.0; // ||rho' - rho^eps||_1, in [0, 2]
    double min_fidelity_sq = 0.0;
};

// The signal state sum_y (-1)^f(x,y) sqrt(b_y) |y>.
PureState clean_state(const BooleanFunction& f, int x, const SimplexVector& b);

// Runs the compute / copy / uncompute steps on the explicit register
// state (y-register, answer qubit, copy qubit prepared in (|0>-|1>)/sqrt(2))
// and reduces to the y-register after checking that the answer and copy
// registers really end where they started.  Validates the phase-kickback
// algebra instead of assuming the closed form.  n <= 6.
PureState simulate_clean_protocol(const BooleanFunction& f, int x, const SimplexVector& b);

// One noisy signal state per x, on n+1 qubits (y-register + answer qubit).
std::vector<PureState> sample_noisy_states(const BooleanFunction& f, const SimplexVector& b,
                                           const NoisyAnswerModel& model);

struct FidelityCheck {
    double fidelity_sq = 0.0;
    bool pass = false;  // fidelity_sq >= (1 - 2 eps)^2 - 1e-12
};
FidelityCheck state_fidelity_check(const PureState& clean, const PureState& noisy,
                                   double epsilon);

// Builds rho' = sum_x a_x |psi_x,0><psi_x,0| and rho^eps from the model,
// and reports both entropies, the trace distance between them and the
// worst per-x fidelity.  n <= 6 (density matrices of dimension 2^(n+1)).
EnsembleReport ensemble_trace_distance(const BooleanFunction& f, const SimplexVector& a,
                                       const SimplexVector& b, const NoisyAnswerModel& model);

// S(sum_x a_x |psi_x><psi_x|) computed from the explicit density matrix;
// the direct route the Gram shortcut is checked against.
double clean_ensemble_entropy(const BooleanFunction& f, const SimplexVector& a,
                              const SimplexVector& b);

}  // namespace commcap
