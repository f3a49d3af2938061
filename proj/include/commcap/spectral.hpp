#pragma once

#include <span>
#include <vector>

#include "commcap/boolfn.hpp"
#include "commcap/matrix.hpp"

namespace commcap {

// Probability distribution over 2^n inputs: the (a_x) or (b_y) weights.
// The rescaling matrices are diag(sqrt(w)).
class SimplexVector {
public:
    // Validates: every weight >= 0, sum within 1e-12 of 1.
    explicit SimplexVector(std::vector<double> weights);

    static SimplexVector uniform(int dim);
    static SimplexVector point_mass(int dim, int index);
    // Rescales arbitrary non-negative weights to sum 1.
    static SimplexVector normalized(std::vector<double> weights);

    int dim() const { return static_cast<int>(weights_.size()); }
    double operator[](int i) const { return weights_[static_cast<size_t>(i)]; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> weights_;
};

// Squared singular values of the rescaled sign matrix (descending, sum 1)
// and their Shannon entropy in bits.
struct SpectrumResult {
    std::vector<double> sigma_sq;
    double entropy_bits = 0.0;
};

// G_ij = sqrt(a_i a_j) * sum_y b_y M_iy M_jy.  Symmetric PSD, trace 1.
RealMatrix gram_matrix(const SignMatrix& m, const SimplexVector& a, const SimplexVector& b);

// Cyclic Jacobi eigensolvers.  Values come back descending; `vectors`
// stores eigenvector i in row i (so A = V^T diag(values) V).
struct SymmetricEigensystem {
    std::vector<double> values;
    RealMatrix vectors;
};
std::vector<double> jacobi_eigenvalues(const RealMatrix& a);
SymmetricEigensystem jacobi_eigensystem(const RealMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

// PSD spectrum with the roundoff policy: eigenvalues in [-1e-10, 0) are
// clamped to 0, anything lower throws (a broken Gram construction, not
// roundoff).  Input must be symmetric/Hermitian within 1e-10 elementwise.
std::vector<double> symmetric_spectrum(const RealMatrix& g);
std::vector<double> hermitian_spectrum(const ComplexMatrix& h);

// -sum p_i log2 p_i with 0 log 0 := 0.  Entries must be >= -1e-10 and
// sum to 1 within 1e-9.
double shannon_entropy(std::span<const double> p);

// Spectrum and entropy of the Gram matrix for (M, a, b): the capacity
// objective evaluated at one pair of distributions.
SpectrumResult capacity_entropy(const SignMatrix& m, const SimplexVector& a,
                                const SimplexVector& b);

}  // namespace commcap
