#pragma once

#include <string_view>

namespace commcap {

enum class FannesVariant { paper, conservative };
enum class DistProvenance { uniform, optimized, user };

std::string_view fannes_variant_name(FannesVariant v);
std::string_view provenance_name(DistProvenance p);

// eta0(x) = -x log2 x for x <= 1/e, log2(e)/e above; continuous at 1/e.
double eta0(double x);

// Entropy loss charged to an error-epsilon protocol.
//   paper:         4 sqrt(eps) n + log2(eta0(4 sqrt(eps)))
//   conservative:  4 sqrt(eps) (n+1) + eta0(4 sqrt(eps))
// The conservative form is textbook Fannes on the (n+1)-qubit states
// that carry the answer qubit.  Negative values are floored to 0 (an
// exact protocol loses nothing).  Any eps >= 0 is accepted: the
// repetition schedule feeds boosted error rates well above 1/2 and
// simply gets a large (vacuous) penalty back.
double fannes_penalty(int n, double epsilon, FannesVariant variant);

// Best majority-vote repetition bound: over odd k up to
// 10*ceil(log2(n+1)) + 1, boost the error to eps'(k) =
// exp(-2k(1/2 - eps)^2) and charge the Fannes penalty at eps'(k),
// dividing the surviving entropy by the k protocol runs.
struct RepetitionBound {
    double bound = 0.0;
    int k_star = 1;
};
RepetitionBound optimized_repetition_bound(double entropy_bits, int n, double epsilon,
                                           FannesVariant variant);

// The four communication-complexity lower bounds derived from one
// capacity entropy, plus the repetition variant.  Negative bounds are
// reported as-is; they are vacuous, not errors.
struct BoundReport {
    double entropy_bits = 0.0;
    int n = 0;
    double epsilon = 0.0;
    double q_exact = 0.0;           // exact protocols
    double q_exact_ent = 0.0;       // exact, shared entanglement (half)
    double q_eps_fannes = 0.0;      // bounded error, direct Fannes form
    double q_eps_ent_fannes = 0.0;  // bounded error, entangled (half)
    double q_eps_repeated = 0.0;    // bounded error via majority-vote repetition
    int repetition_k = 1;
    FannesVariant fannes_variant = FannesVariant::conservative;
    DistProvenance distribution_provenance = DistProvenance::uniform;
};

BoundReport theorem1_report(double entropy_bits, int n, double epsilon,
                            FannesVariant variant, DistProvenance provenance);

}  // namespace commcap
