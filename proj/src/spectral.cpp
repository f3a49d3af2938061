#include "commcap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace commcap {

namespace {

constexpr double kSimplexSumTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kEigClampFloor = -1e-10;  // below this a "PSD" matrix is considered broken
constexpr double kProbSumTol = 1e-9;
constexpr int kMaxJacobiSweeps = 30;
constexpr double kJacobiOffTol = 1e-12;  // relative to the Frobenius norm

inline double conj_scalar(double x) { return x; }
inline std::complex<double> conj_scalar(const std::complex<double>& z) { return std::conj(z); }

inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const std::complex<double>& z) { return std::norm(z); }

// Cyclic Jacobi on a symmetric / Hermitian matrix.  Rotations whose pivot
// is at most off_target/d are skipped: even if every pair sits exactly at
// that threshold the off-diagonal norm is already within the target.
// In the Hermitian case each rotation is preceded by a phase that makes
// the pivot real, which reduces the 2x2 block to the real formulas.
// Eigenvectors, if requested, accumulate as rows of `vectors`
// (a = vectors^H diag(values) vectors).
template <typename Scalar>
std::vector<double> jacobi_diagonalize(SquareMatrix<Scalar> a, SquareMatrix<Scalar>* vectors) {
    const int d = a.dim();
    if (vectors) {
        *vectors = SquareMatrix<Scalar>(d, Scalar{0});
        for (int i = 0; i < d; ++i) (*vectors)(i, i) = Scalar{1};
    }

    double norm_sq = 0.0;
    for (const Scalar& v : a.data()) norm_sq += abs_sq(v);
    const double off_target = kJacobiOffTol * std::sqrt(norm_sq);
    const double skip = d > 0 ? off_target / d : 0.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) s += abs_sq(a(i, j));
        return std::sqrt(2.0 * s);
    };

    bool converged = norm_sq == 0.0;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        if (off_norm() <= off_target) {
            converged = true;
            break;
        }
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq_abs = std::abs(a(p, q));
                if (apq_abs <= skip) continue;

                // Phase making the pivot real non-negative (+-1 in the real case).
                Scalar w;
                if constexpr (std::is_same_v<Scalar, double>) {
                    w = a(p, q) >= 0.0 ? 1.0 : -1.0;
                } else {
                    w = a(p, q) / apq_abs;
                }

                const double app = std::real(a(p, p));
                const double aqq = std::real(a(q, q));
                const double tau = (aqq - app) / (2.0 * apq_abs);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 1.0 / (2.0 * tau);
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                a(p, p) = app - t * apq_abs;
                a(q, q) = aqq + t * apq_abs;
                a(p, q) = Scalar{0};
                a(q, p) = Scalar{0};

                Scalar* rp = a.row(p);
                Scalar* rq = a.row(q);
                const Scalar wc = conj_scalar(w);
                for (int k = 0; k < d; ++k) {
                    if (k == p || k == q) continue;
                    const Scalar apk = wc * rp[k];
                    const Scalar aqk = rq[k];
                    rp[k] = c * apk - s * aqk;
                    rq[k] = s * apk + c * aqk;
                }
                // Mirror into the columns so later row reads stay valid.
                for (int k = 0; k < d; ++k) {
                    if (k == p || k == q) continue;
                    a(k, p) = conj_scalar(rp[k]);
                    a(k, q) = conj_scalar(rq[k]);
                }

                if (vectors) {
                    Scalar* vp = vectors->row(p);
                    Scalar* vq = vectors->row(q);
                    for (int k = 0; k < d; ++k) {
                        const Scalar hp = wc * vp[k];
                        const Scalar hq = vq[k];
                        vp[k] = c * hp - s * hq;
                        vq[k] = s * hp + c * hq;
                    }
                }
            }
        }
    }
    if (!converged && off_norm() > off_target) {
        throw std::runtime_error("jacobi eigensolver failed to converge in " +
                                 std::to_string(kMaxJacobiSweeps) + " sweeps");
    }

    std::vector<double> values(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) values[static_cast<size_t>(i)] = std::real(a(i, i));

    std::vector<int> order(static_cast<size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return values[static_cast<size_t>(i)] > values[static_cast<size_t>(j)];
    });

    std::vector<double> sorted(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) sorted[static_cast<size_t>(i)] = values[static_cast<size_t>(order[static_cast<size_t>(i)])];
    if (vectors) {
        SquareMatrix<Scalar> perm(d);
        for (int i = 0; i < d; ++i) {
            const Scalar* src = vectors->row(order[static_cast<size_t>(i)]);
            std::copy(src, src + d, perm.row(i));
        }
        *vectors = std::move(perm);
    }
    return sorted;
}

template <typename Scalar>
void check_hermitian(const SquareMatrix<Scalar>& g, const char* what) {
    const int d = g.dim();
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            if (std::abs(g(i, j) - conj_scalar(g(j, i))) > kSymmetryTol) {
                throw std::invalid_argument(std::string(what) + ": input is not symmetric");
            }
        }
    }
}

std::vector<double> clamp_psd_spectrum(std::vector<double> values, const char* what) {
    for (double& v : values) {
        if (v < kEigClampFloor) {
            throw std::runtime_error(std::string(what) + ": eigenvalue " + std::to_string(v) +
                                     " below the roundoff window; construction is broken");
        }
        if (v < 0.0) v = 0.0;
    }
    return values;
}

}  // namespace

SimplexVector::SimplexVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("simplex vector must be non-empty");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw std::invalid_argument("simplex weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTol) {
        throw std::invalid_argument("simplex weights must sum to 1 (got " + std::to_string(sum) +
                                    ")");
    }
}

SimplexVector SimplexVector::uniform(int dim) {
    if (dim < 1) throw std::invalid_argument("simplex dimension must be positive");
    return SimplexVector(std::vector<double>(static_cast<size_t>(dim), 1.0 / dim));
}

SimplexVector SimplexVector::point_mass(int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim) {
        throw std::invalid_argument("point mass out of range");
    }
    std::vector<double> w(static_cast<size_t>(dim), 0.0);
    w[static_cast<size_t>(index)] = 1.0;
    return SimplexVector(std::move(w));
}

SimplexVector SimplexVector::normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("simplex weights must be non-negative");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("cannot normalize all-zero weights");
    for (double& w : weights) w /= sum;
    return SimplexVector(std::move(weights));
}

RealMatrix gram_matrix(const SignMatrix& m, const SimplexVector& a, const SimplexVector& b) {
    const int d = m.dim();
    if (a.dim() != d || b.dim() != d) {
        throw std::invalid_argument("gram_matrix: dimension mismatch");
    }
    std::vector<double> sqrt_a(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) sqrt_a[static_cast<size_t>(i)] = std::sqrt(a[i]);

    RealMatrix g(d);
    const double* bw = b.weights().data();
    for (int i = 0; i < d; ++i) {
        const int8_t* ri = m.row(i);
        for (int j = i; j < d; ++j) {
            const int8_t* rj = m.row(j);
            double s = 0.0;
            for (int y = 0; y < d; ++y) {
                s += bw[y] * static_cast<double>(ri[y] * rj[y]);
            }
            const double gij = sqrt_a[static_cast<size_t>(i)] * sqrt_a[static_cast<size_t>(j)] * s;
            g(i, j) = gij;
            g(j, i) = gij;
        }
    }
    return g;
}

std::vector<double> jacobi_eigenvalues(const RealMatrix& a) {
    return jacobi_diagonalize<double>(a, nullptr);
}

SymmetricEigensystem jacobi_eigensystem(const RealMatrix& a) {
    SymmetricEigensystem out;
    out.values = jacobi_diagonalize<double>(a, &out.vectors);
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
    return jacobi_diagonalize<std::complex<double>>(a, nullptr);
}

std::vector<double> symmetric_spectrum(const RealMatrix& g) {
    check_hermitian(g, "symmetric_spectrum");
    return clamp_psd_spectrum(jacobi_eigenvalues(g), "symmetric_spectrum");
}

std::vector<double> hermitian_spectrum(const ComplexMatrix& h) {
    check_hermitian(h, "hermitian_spectrum");
    return clamp_psd_spectrum(hermitian_eigenvalues(h), "hermitian_spectrum");
}

double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    double acc = 0.0;  // natural log; converted to bits once at the end
    for (double v : p) {
        if (v < kEigClampFloor) {
            throw std::invalid_argument("shannon_entropy: negative probability " +
                                        std::to_string(v));
        }
        if (v > 0.0) acc -= v * std::log(v);
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTol) {
        throw std::invalid_argument("shannon_entropy: probabilities sum to " +
                                    std::to_string(sum));
    }
    return std::max(acc / std::numbers::ln2, 0.0);
}

SpectrumResult capacity_entropy(const SignMatrix& m, const SimplexVector& a,
                                const SimplexVector& b) {
    SpectrumResult out;
    out.sigma_sq = symmetric_spectrum(gram_matrix(m, a, b));
    const double sum = std::accumulate(out.sigma_sq.begin(), out.sigma_sq.end(), 0.0);
    if (std::abs(sum - 1.0) > kProbSumTol) {
        throw std::runtime_error("capacity_entropy: spectrum sums to " + std::to_string(sum));
    }
    out.entropy_bits = shannon_entropy(out.sigma_sq);
    const double n_bits = static_cast<double>(m.n());
    if (out.entropy_bits > n_bits + kProbSumTol) {
        throw std::runtime_error("capacity_entropy: entropy " + std::to_string(out.entropy_bits) +
                                 " exceeds n");
    }
    out.entropy_bits = std::min(out.entropy_bits, n_bits);
    return out;
}

}  // namespace commcap
