#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmp/quantum.hpp"

using namespace qmp;
using namespace qmp::quantum;

namespace {

QuantumState bell_phi_plus() {
    QuantumState s(2, 1);
    s.at(0, 0) = 1 / std::sqrt(2.0);
    s.at(1, 1) = 1 / std::sqrt(2.0);
    return s;
}

QuantumState bell_psi_plus() {
    QuantumState s(2, 1);
    s.at(0, 1) = 1 / std::sqrt(2.0);
    s.at(1, 0) = 1 / std::sqrt(2.0);
    return s;
}

QuantumState random_state(int q, int a, Rng& rng) {
    QuantumState s(q, a);
    for (auto& c : s.amp) {
        const double re = static_cast<double>(rng.u64() >> 11) * 0x1p-52 - 1.0;
        const double im = static_cast<double>(rng.u64() >> 11) * 0x1p-52 - 1.0;
        c = {re, im};
    }
    s.normalize();
    return s;
}

CMat random_hermitian(int d, Rng& rng) {
    CMat m(d);
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
            const double re = static_cast<double>(rng.u64() >> 11) * 0x1p-52 - 1.0;
            const double im = c == r ? 0.0 : static_cast<double>(rng.u64() >> 11) * 0x1p-52 - 1.0;
            m.at(r, c) = {re, im};
            m.at(c, r) = {re, -im};
        }
    return m;
}

}  // namespace

TEST_CASE("jacobi eigensolver reconstructs random Hermitian matrices") {
    Rng rng(5);
    for (int d : {2, 3, 4, 8, 16}) {
        CMat m = random_hermitian(d, rng);
        auto es = eigen_hermitian(m);
        CHECK(is_unitary(es.vectors, 1e-9));
        // m * V == V * diag(values)
        CMat mv = m.mul(es.vectors);
        double worst = 0;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                worst = std::max(worst, std::abs(mv.at(r, c) -
                                                 es.values[static_cast<size_t>(c)] *
                                                     es.vectors.at(r, c)));
        CHECK(worst < 1e-9);
        for (size_t i = 1; i < es.values.size(); ++i) CHECK(es.values[i - 1] <= es.values[i]);
    }
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
    auto s = bell_phi_plus();
    for (Keep side : {Keep::Alice, Keep::Bob}) {
        auto rho = partial_trace(s, side);
        CHECK(std::abs(rho.at(0, 0) - cplx{0.5}) < 1e-12);
        CHECK(std::abs(rho.at(1, 1) - cplx{0.5}) < 1e-12);
        CHECK(std::abs(rho.at(0, 1)) < 1e-12);
    }
}

TEST_CASE("partial trace of a product state is pure") {
    QuantumState s(2, 1);
    s.at(0, 1) = 1.0;  // |0> (x) |1>
    auto rho = partial_trace(s, Keep::Bob);
    CHECK(std::abs(rho.at(1, 1) - cplx{1.0}) < 1e-12);
    CHECK(std::abs(rho.at(0, 0)) < 1e-12);
}

TEST_CASE("partial traces of random states are density matrices") {
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        auto s = random_state(4, 2, rng);
        CHECK(is_density_matrix(partial_trace(s, Keep::Alice), 1e-10));
        CHECK(is_density_matrix(partial_trace(s, Keep::Bob), 1e-10));
    }
}

TEST_CASE("trace distance basics") {
    QuantumState zero(1, 0), one(1, 0), plus(1, 0);
    zero.amp[0] = 1;
    one.amp[1] = 1;
    plus.amp[0] = plus.amp[1] = 1 / std::sqrt(2.0);

    auto rz = partial_trace(zero, Keep::Bob);
    auto ro = partial_trace(one, Keep::Bob);
    auto rp = partial_trace(plus, Keep::Bob);

    CHECK(trace_distance(rz, rz) == doctest::Approx(0).epsilon(1e-12));
    CHECK(trace_distance(rz, ro) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(trace_distance(rz, rp) - std::sqrt(0.5)) < 1e-10);
}

TEST_CASE("schmidt decomposition") {
    auto sd = schmidt_decompose(bell_phi_plus());
    REQUIRE(sd.coefficients.size() == 2);
    CHECK(std::abs(sd.coefficients[0] - 1 / std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(sd.coefficients[1] - 1 / std::sqrt(2.0)) < 1e-10);

    QuantumState prod(2, 1);
    prod.at(1, 0) = 1.0;
    auto sp = schmidt_decompose(prod);
    REQUIRE(sp.coefficients.size() == 1);
    CHECK(std::abs(sp.coefficients[0] - 1.0) < 1e-10);

    QuantumState skew(2, 1);
    skew.at(0, 0) = std::sqrt(0.8);
    skew.at(1, 1) = std::sqrt(0.2);
    auto ss = schmidt_decompose(skew);
    REQUIRE(ss.coefficients.size() == 2);
    CHECK(std::abs(ss.coefficients[0] - std::sqrt(0.8)) < 1e-10);
    CHECK(std::abs(ss.coefficients[1] - std::sqrt(0.2)) < 1e-10);
}

TEST_CASE("schmidt reconstruction error stays below 1e-8") {
    Rng rng(11);
    for (int i = 0; i < 8; ++i) {
        auto s = random_state(4, 2, rng);
        auto sd = schmidt_decompose(s);
        double sum = 0;
        for (double c : sd.coefficients) sum += c * c;
        CHECK(std::abs(sum - 1.0) < 1e-10);

        QuantumState rebuilt(4, 2);
        for (size_t k = 0; k < sd.coefficients.size(); ++k)
            for (int ai = 0; ai < s.alice_dim(); ++ai)
                for (int bi = 0; bi < s.bob_dim(); ++bi)
                    rebuilt.at(ai, bi) += sd.coefficients[k] * sd.alice[k][static_cast<size_t>(ai)] *
                                          sd.bob[k][static_cast<size_t>(bi)];
        double err = 0;
        for (size_t j = 0; j < s.amp.size(); ++j) err += std::norm(rebuilt.amp[j] - s.amp[j]);
        CHECK(std::sqrt(err) < 1e-8);
    }
}

TEST_CASE("hjw unitary flips one Bell state into the other") {
    auto u = hjw_unitary(bell_phi_plus(), bell_psi_plus());
    CHECK(is_unitary(u, 1e-10));
    // X up to a global phase
    CHECK(std::abs(u.at(0, 0)) < 1e-9);
    CHECK(std::abs(u.at(1, 1)) < 1e-9);
    CHECK(std::abs(std::abs(u.at(0, 1)) - 1.0) < 1e-9);
    CHECK(fidelity(apply_alice_unitary(u, bell_phi_plus()), bell_psi_plus()) > 1 - 1e-8);
}

TEST_CASE("hjw unitary on identical states acts as the identity") {
    auto s = bell_phi_plus();
    auto u = hjw_unitary(s, s);
    CHECK(fidelity(apply_alice_unitary(u, s), s) > 1 - 1e-8);
}

TEST_CASE("hjw on product states with equal Bob part") {
    QuantumState a(2, 1), b(2, 1);
    a.at(0, 0) = 1.0;  // |00>
    b.at(1, 0) = 1.0;  // |10>
    auto u = hjw_unitary(a, b);
    CHECK(std::abs(std::abs(u.at(1, 0)) - 1.0) < 1e-9);
    CHECK(fidelity(apply_alice_unitary(u, a), b) > 1 - 1e-8);
}

TEST_CASE("hjw refuses states with different reductions") {
    QuantumState a(2, 1), b(2, 1);
    a.at(0, 0) = 1.0;  // Bob sees |0>
    b.at(0, 1) = 1.0;  // Bob sees |1>
    CHECK_THROWS_AS(hjw_unitary(a, b), NotSameReduction);
}

TEST_CASE("hjw round trip returns the original state") {
    Rng rng(13);
    for (int i = 0; i < 6; ++i) {
        auto s = random_state(4, 2, rng);
        auto t = random_state(4, 2, rng);
        // Build phi with the same Bob reduction by applying a random Alice
        // unitary to s.
        auto u0 = hjw_unitary(s, s);
        (void)u0;
        auto sd = schmidt_decompose(t);
        (void)sd;
        auto u = hjw_unitary(s, apply_alice_unitary(eigen_hermitian(random_hermitian(4, rng)).vectors, s));
        auto there = apply_alice_unitary(u, s);
        auto back = apply_alice_unitary(u.adjoint(), there);
        CHECK(fidelity(back, s) > 1 - 1e-8);
    }
}

TEST_CASE("gates preserve the norm") {
    Rng rng(17);
    CMat h(2);
    const double r = 1 / std::sqrt(2.0);
    h.at(0, 0) = r;
    h.at(0, 1) = r;
    h.at(1, 0) = r;
    h.at(1, 1) = -r;
    for (int i = 0; i < 10; ++i) {
        auto s = random_state(3, 1, rng);
        apply_single_qubit(s, static_cast<int>(rng.below(3)), h);
        CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("attack demo certifies the entangling protocol as flippable") {
    Rng rng(19);
    auto r = mayers_attack_demo(ToyProtocol::Entangling, rng);
    CHECK(r.bob_trace_distance < 1e-10);
    CHECK(r.flip_fidelity > 1 - 1e-8);
    CHECK(r.certified == AttackReport::Certified::Flippable);
}

TEST_CASE("attack demo certifies the revealing protocol as distinguishable") {
    Rng rng(23);
    auto r = mayers_attack_demo(ToyProtocol::Revealing, rng);
    CHECK(std::abs(r.bob_trace_distance - 1.0) < 1e-10);
    CHECK(r.not_same_reduction_raised);
    CHECK(r.certified == AttackReport::Certified::Distinguishable);
}

TEST_CASE("measurement before the flip does not save the protocol") {
    for (uint64_t seed = 0; seed < 8; ++seed) {
        Rng rng(seed);
        auto r = mayers_attack_demo(ToyProtocol::MeasureThenFlip, rng);
        CHECK(r.measured_outcome_bias < 1e-12);
        CHECK(r.ancilla_outcome >= 0);
        CHECK(r.flip_fidelity > 1 - 1e-8);
        CHECK(r.certified == AttackReport::Certified::Flippable);
    }
}

TEST_CASE("exactly one attack branch certifies per protocol") {
    for (auto p : {ToyProtocol::Entangling, ToyProtocol::Revealing, ToyProtocol::MeasureThenFlip}) {
        Rng rng(29);
        auto r = mayers_attack_demo(p, rng);
        const bool flip = r.certified == AttackReport::Certified::Flippable;
        if (flip) {
            CHECK(r.flip_fidelity > 1 - 1e-8);
            CHECK(r.bob_trace_distance < 1e-10);
        } else {
            CHECK(r.bob_trace_distance > 1e-10);
            CHECK(r.flip_fidelity == 0);
        }
    }
}

TEST_CASE("conjugate coding round trips in matching bases") {
    Rng rng(31);
    for (int bit = 0; bit <= 1; ++bit)
        for (int basis = 0; basis <= 1; ++basis)
            for (int i = 0; i < 10; ++i) {
                auto q = prepare_conjugate(bit, basis);
                CHECK(measure_conjugate(q, basis, rng) == bit);
            }
}

TEST_CASE("conjugate coding in the wrong basis is a coin flip") {
    Rng rng(37);
    int ones = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        auto q = prepare_conjugate(0, 0);
        ones += measure_conjugate(q, 1, rng);
    }
    CHECK(ones > trials / 2 - 200);
    CHECK(ones < trials / 2 + 200);
}

TEST_CASE("toy protocol names round trip") {
    for (auto p : {ToyProtocol::Entangling, ToyProtocol::Revealing, ToyProtocol::MeasureThenFlip})
        CHECK(toy_protocol_from_name(toy_protocol_name(p)) == p);
    CHECK_THROWS_AS(toy_protocol_from_name("bogus"), std::invalid_argument);
}
