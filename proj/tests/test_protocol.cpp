#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <numbers>

#include "commcap/bounds.hpp"
#include "commcap/protocol.hpp"
#include "test_support.hpp"

using namespace commcap;
namespace ts = commcap::testsupport;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

const std::vector<Family> kDeterministicFamilies = {Family::ip,     Family::eq,
                                                    Family::ne,     Family::disj,
                                                    Family::const0, Family::const1};

}  // namespace

TEST_SUITE_BEGIN("protocol");

TEST_CASE("clean state closed form") {
    const SimplexVector u = SimplexVector::uniform(2);
    const BooleanFunction ip = make_family(Family::ip, 1);

    const PureState minus = clean_state(ip, 1, u);
    CHECK(minus.amplitudes()[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(minus.amplitudes()[1].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));

    const PureState plus = clean_state(ip, 0, u);
    CHECK(plus.amplitudes()[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(plus.amplitudes()[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));

    const BooleanFunction c0 = make_family(Family::const0, 1);
    const PureState point = clean_state(c0, 1, SimplexVector::point_mass(2, 0));
    CHECK(point.amplitudes()[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(point.amplitudes()[1]) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(clean_state(ip, 2, u), std::invalid_argument);
}

TEST_CASE("register simulation reproduces the closed form, including signs") {
    const SimplexVector u = SimplexVector::uniform(2);

    // EQ with x = 0: f(0,0) = 1, f(0,1) = 0 gives (-|0> + |1>)/sqrt(2).
    const PureState eq0 = simulate_clean_protocol(make_family(Family::eq, 1), 0, u);
    CHECK(eq0.amplitudes()[0].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
    CHECK(eq0.amplitudes()[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));

    // CONST1 flips every sign uniformly.
    const PureState c1 = simulate_clean_protocol(make_family(Family::const1, 1), 0, u);
    CHECK(c1.amplitudes()[0].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
    CHECK(c1.amplitudes()[1].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
}

TEST_CASE("simulation and closed form agree for every family, x and n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        const SimplexVector b = ts::random_simplex(1 << n, 17u + static_cast<uint64_t>(n), 3);
        for (Family fam : kDeterministicFamilies) {
            const BooleanFunction f = make_family(fam, n);
            for (int x = 0; x < f.dim(); ++x) {
                const double dist = l2_distance(simulate_clean_protocol(f, x, b).canonical(),
                                                clean_state(f, x, b).canonical());
                CHECK(dist <= 1e-10);
            }
        }
    }
}

TEST_CASE("simulation rejects oversized registers") {
    const BooleanFunction f = make_family(Family::random, 7, 1);
    CHECK_THROWS_AS(simulate_clean_protocol(f, 0, SimplexVector::uniform(128)),
                    std::invalid_argument);
}

TEST_CASE("noise-free model reproduces the clean states exactly") {
    const BooleanFunction f = make_family(Family::ip, 2);
    const SimplexVector b = SimplexVector::uniform(4);
    const NoisyAnswerModel model = NoisyAnswerModel::sample(2, 0.0, 9);
    const auto noisy = sample_noisy_states(f, b, model);
    for (int x = 0; x < 4; ++x) {
        const PureState clean = clean_state(f, x, b);
        for (int y = 0; y < 4; ++y) {
            CHECK(noisy[static_cast<size_t>(x)].amplitudes()[static_cast<size_t>(y) * 2] ==
                  clean.amplitudes()[static_cast<size_t>(y)]);
            CHECK(std::abs(noisy[static_cast<size_t>(x)]
                               .amplitudes()[static_cast<size_t>(y) * 2 + 1]) == 0.0);
        }
    }
}

TEST_CASE("constant theta gives the product-state closed form") {
    const double theta0 = 0.3;
    const int n = 1;
    RealMatrix theta(2, theta0);
    RealMatrix phi(2, 0.0);
    const NoisyAnswerModel model =
        NoisyAnswerModel::from_angles(0.25, std::move(theta), std::move(phi));
    const BooleanFunction c0 = make_family(Family::const0, n);
    const SimplexVector b = SimplexVector::uniform(2);
    const auto noisy = sample_noisy_states(c0, b, model);
    for (int y = 0; y < 2; ++y) {
        CHECK(noisy[0].amplitudes()[static_cast<size_t>(y) * 2].real() ==
              doctest::Approx(kInvSqrt2 * std::cos(theta0)).epsilon(1e-12));
        CHECK(noisy[0].amplitudes()[static_cast<size_t>(y) * 2 + 1].real() ==
              doctest::Approx(kInvSqrt2 * std::sin(theta0)).epsilon(1e-12));
    }
}

TEST_CASE("sampled models keep the promised overlap with the clean states") {
    const BooleanFunction f = make_family(Family::ip, 1);
    const SimplexVector b = SimplexVector::uniform(2);
    const NoisyAnswerModel model = NoisyAnswerModel::sample(1, 0.01, 3);
    const auto noisy = sample_noisy_states(f, b, model);
    for (int x = 0; x < 2; ++x) {
        const FidelityCheck fc =
            state_fidelity_check(clean_state(f, x, b), noisy[static_cast<size_t>(x)], 0.01);
        CHECK(fc.fidelity_sq >= 0.98 * 0.98);
        CHECK(fc.pass);
    }
}

TEST_CASE("fidelity check edge cases") {
    const BooleanFunction f = make_family(Family::ip, 1);
    const SimplexVector b = SimplexVector::uniform(2);
    const PureState clean = clean_state(f, 0, b);

    // Padding with |0> is a perfect match.
    std::vector<std::complex<double>> padded(4);
    padded[0] = clean.amplitudes()[0];
    padded[2] = clean.amplitudes()[1];
    const PureState same(padded, {{"y", 1}, {"answer", 1}});
    const FidelityCheck perfect = state_fidelity_check(clean, same, 0.3);
    CHECK(perfect.fidelity_sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(perfect.pass);

    // cos(theta) pinned at 1 - 2 eps sits exactly on the floor.
    const double eps = 0.25;
    RealMatrix theta(2, std::acos(0.5));
    RealMatrix phi(2, 0.0);
    const NoisyAnswerModel model =
        NoisyAnswerModel::from_angles(eps, std::move(theta), std::move(phi));
    const auto noisy = sample_noisy_states(f, b, model);
    const FidelityCheck boundary = state_fidelity_check(clean, noisy[0], eps);
    CHECK(boundary.fidelity_sq == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(boundary.pass);

    // Orthogonal state fails for any eps < 1/2.
    std::vector<std::complex<double>> orth(4);
    orth[1] = 1.0;  // answer qubit |1>
    const FidelityCheck fail = state_fidelity_check(clean, PureState(orth, {{"y", 1}, {"answer", 1}}),
                                                    0.49);
    CHECK(fail.fidelity_sq == doctest::Approx(0.0));
    CHECK(!fail.pass);

    CHECK_THROWS_AS(state_fidelity_check(clean, clean, 0.1), std::invalid_argument);
}

TEST_CASE("noisy model validation") {
    CHECK_THROWS_AS(NoisyAnswerModel::sample(2, 0.5, 1), std::invalid_argument);
    RealMatrix theta(2, 1.2);  // cos(1.2) = 0.362 < 1 - 2*0.1
    RealMatrix phi(2, 0.0);
    CHECK_THROWS_AS(NoisyAnswerModel::from_angles(0.1, theta, phi), std::invalid_argument);
    RealMatrix bad_phi(2, 7.0);  // >= 2 pi
    RealMatrix ok_theta(2, 0.0);
    CHECK_THROWS_AS(NoisyAnswerModel::from_angles(0.1, ok_theta, bad_phi), std::invalid_argument);
}

TEST_CASE("noise-free ensembles coincide") {
    const BooleanFunction f = make_family(Family::eq, 2);
    const SimplexVector u = SimplexVector::uniform(4);
    const NoisyAnswerModel model = NoisyAnswerModel::sample(2, 0.0, 5);
    const EnsembleReport rep = ensemble_trace_distance(f, u, u, model);
    CHECK(rep.trace_distance == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(rep.s_noisy == doctest::Approx(rep.s_clean).epsilon(1e-10));
    CHECK(rep.min_fidelity_sq == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noisy ensemble for IP stays within the documented budget") {
    const BooleanFunction f = make_family(Family::ip, 2);
    const SimplexVector u = SimplexVector::uniform(4);
    const NoisyAnswerModel model = NoisyAnswerModel::sample(2, 0.01, 5);
    const EnsembleReport rep = ensemble_trace_distance(f, u, u, model);
    CHECK(rep.trace_distance <= 0.4);
    CHECK(rep.s_noisy >= rep.s_clean - fannes_penalty(2, 0.01, FannesVariant::conservative));
}

TEST_CASE("sampled models satisfy the fidelity floor and trace-distance ceiling") {
    const BooleanFunction f = make_family(Family::random, 3, 77);
    const SimplexVector u = SimplexVector::uniform(8);
    int checked = 0;
    for (double eps : {0.01, 0.05, 0.1}) {
        const double floor = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps);
        const double ceiling = 4.0 * std::sqrt(eps);
        for (uint64_t seed = 0; seed < 34; ++seed) {
            const NoisyAnswerModel model = NoisyAnswerModel::sample(3, eps, seed);
            const EnsembleReport rep = ensemble_trace_distance(f, u, u, model);
            CHECK(rep.min_fidelity_sq >= floor - 1e-12);
            CHECK(rep.trace_distance <= ceiling + 1e-9);
            CHECK(rep.s_noisy >=
                  rep.s_clean - fannes_penalty(3, eps, FannesVariant::conservative) - 1e-9);
            ++checked;
        }
    }
    CHECK(checked == 102);
}

TEST_CASE("ensemble entropy equals the Gram-spectrum entropy") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const BooleanFunction f = make_family(Family::random, 3, seed + 400);
        const SimplexVector a = SimplexVector::uniform(8);
        const SimplexVector b = ts::random_simplex(8, seed, 71);
        const double direct = clean_ensemble_entropy(f, a, b);
        const double via_gram =
            capacity_entropy(sign_matrix(f), a, b).entropy_bits;
        CHECK(direct == doctest::Approx(via_gram).epsilon(1e-8));
    }
}

TEST_CASE("canonical phase fixes the first nonzero amplitude") {
    std::vector<std::complex<double>> amps = {std::complex<double>(0.0, 0.0),
                                              std::complex<double>(0.0, -kInvSqrt2),
                                              std::complex<double>(kInvSqrt2, 0.0),
                                              std::complex<double>(0.0, 0.0)};
    const PureState s(amps, {{"y", 2}});
    const PureState c = s.canonical();
    CHECK(c.amplitudes()[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(std::abs(c.amplitudes()[1].imag()) <= 1e-12);
    CHECK(c.amplitudes()[2].imag() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
}

TEST_SUITE_END();
