#pragma once

#include <span>

#include "commcap/boolfn.hpp"

namespace commcap {

enum class Renyi2Method { from_spectrum, uniform_fast };

struct Renyi2Result {
    double s2_bits = 0.0;
    Renyi2Method method = Renyi2Method::from_spectrum;
};

// S2 = -log2 sum p_i^2 of a probability vector.
Renyi2Result renyi2_of_spectrum(std::span<const double> p);

// S2 under uniform distributions, straight from the sign matrix:
// S2 = 4n - log2 tr((MM^T)^2), evaluated as the sum of squared entries
// of R = MM^T.  Integer arithmetic until the final logarithm; for
// n <= 13 the sum fits in 64 bits.
Renyi2Result renyi2_uniform_fast(const SignMatrix& m);

}  // namespace commcap
