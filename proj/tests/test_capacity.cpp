#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "commcap/capacity.hpp"
#include "commcap/spectral.hpp"
#include "test_support.hpp"

using namespace commcap;
namespace ts = commcap::testsupport;

TEST_SUITE_BEGIN("capacity");

TEST_CASE("renyi2 of small spectra") {
    CHECK(renyi2_of_spectrum(std::vector<double>{0.5, 0.5}).s2_bits ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(renyi2_of_spectrum(std::vector<double>{1.0, 0.0}).s2_bits ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(renyi2_of_spectrum(std::vector<double>{0.5, 0.25, 0.25}).s2_bits ==
          doctest::Approx(-std::log2(0.375)).epsilon(1e-12));
    CHECK(renyi2_of_spectrum(std::vector<double>{0.5, 0.5}).method ==
          Renyi2Method::from_spectrum);
    CHECK_THROWS_AS(renyi2_of_spectrum(std::vector<double>{0.7, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(renyi2_of_spectrum(std::vector<double>{1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("fast uniform renyi2 on the 1-bit families") {
    CHECK(renyi2_uniform_fast(sign_matrix(make_family(Family::ip, 1))).s2_bits ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(renyi2_uniform_fast(sign_matrix(make_family(Family::const0, 1))).s2_bits ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(renyi2_uniform_fast(sign_matrix(make_family(Family::eq, 1))).s2_bits ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(renyi2_uniform_fast(sign_matrix(make_family(Family::ip, 1))).method ==
          Renyi2Method::uniform_fast);
}

TEST_CASE("fast path matches the literal four-index sum") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        const int n = 1 + static_cast<int>(seed % 3);
        const SignMatrix m = sign_matrix(make_family(Family::random, n, seed));
        const int64_t literal = ts::quartic_sign_sum(m);
        const double want = 4.0 * n - std::log2(static_cast<double>(literal));
        CHECK(renyi2_uniform_fast(m).s2_bits == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("fast path equals the spectrum path under uniform distributions") {
    for (uint64_t seed = 0; seed < 25; ++seed) {
        const int n = 1 + static_cast<int>(seed % 5);
        const SignMatrix m = sign_matrix(make_family(Family::random, n, seed * 7 + 3));
        const SimplexVector u = SimplexVector::uniform(m.dim());
        const SpectrumResult spec = capacity_entropy(m, u, u);
        const double via_spectrum = renyi2_of_spectrum(spec.sigma_sq).s2_bits;
        const double fast = renyi2_uniform_fast(m).s2_bits;
        CHECK(fast == doctest::Approx(via_spectrum).epsilon(1e-8));
        // S2 lower-bounds the von Neumann entropy.
        CHECK(fast <= spec.entropy_bits + 1e-9);
    }
}

TEST_CASE("renyi2 is invariant under permutations and global sign flip") {
    const SignMatrix m = sign_matrix(make_family(Family::random, 3, 2024));
    const double base = renyi2_uniform_fast(m).s2_bits;
    const int d = m.dim();

    std::vector<int8_t> flipped(m.entries());
    for (int8_t& v : flipped) v = static_cast<int8_t>(-v);
    CHECK(renyi2_uniform_fast(SignMatrix(m.n(), std::move(flipped))).s2_bits ==
          doctest::Approx(base).epsilon(1e-12));

    std::vector<int8_t> permuted(static_cast<size_t>(d) * d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            permuted[static_cast<size_t>(x) * d + y] =
                static_cast<int8_t>(m.entry((x + 3) % d, (y + 5) % d));
    CHECK(renyi2_uniform_fast(SignMatrix(m.n(), std::move(permuted))).s2_bits ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_SUITE_END();
