#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmp/bb84.hpp"
#include "qmp/rng.hpp"

using namespace qmp;
using namespace qmp::bb84;

namespace {

Params fast_params() {
    Params p;
    p.num_positions = 64;
    p.test_fraction = 0.25;
    p.min_good = 8;
    p.with_log = false;
    return p;
}

}  // namespace

TEST_CASE("honest runs deliver the chosen bit") {
    Params p;
    p.with_log = false;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        const int b0 = static_cast<int>(seed & 1), b1 = static_cast<int>((seed >> 1) & 1);
        const int c = static_cast<int>((seed >> 2) & 1);
        auto s = bb84_ot(b0, b1, c, p, ReceiverMode::Honest, seed);
        REQUIRE(s.verdict == Bb84Session::Verdict::Accept);
        CHECK(s.receiver_output == (c ? b1 : b0));
        CHECK(s.index_sets[0].size() == s.index_sets[1].size());
        CHECK(static_cast<int>(s.index_sets[0].size()) >= p.min_good);
        CHECK(s.commitments == p.num_positions);
    }
}

TEST_CASE("transcript records the protocol phases") {
    Params p;
    auto s = bb84_ot(1, 0, 1, p, ReceiverMode::Honest, 5);
    REQUIRE(s.verdict == Bb84Session::Verdict::Accept);
    bool saw_test = false, saw_verdict = false;
    for (const auto& line : s.log.lines) {
        if (line.find("test-set") != std::string::npos) saw_test = true;
        if (line.find("verdict accept") == 0) saw_verdict = true;
    }
    CHECK(saw_test);
    CHECK(saw_verdict);
}

TEST_CASE("delayed attacker detection matches the analytic rate") {
    Params p = fast_params();  // |R| = 16
    const int test_size = static_cast<int>(p.test_fraction * p.num_positions);
    const double q = delayed_attack_detection_probability(test_size);

    const long trials = 2000;
    long detected = 0;
    for (long i = 0; i < trials; ++i) {
        auto s = bb84_ot(1, 0, 0, p, ReceiverMode::DelayedMeasurement, derive_seed(99, i));
        if (s.verdict == Bb84Session::Verdict::AbortCheatDetected) ++detected;
    }
    const double freq = static_cast<double>(detected) / static_cast<double>(trials);
    const double sigma = std::sqrt(q * (1 - q) / static_cast<double>(trials));
    CHECK(std::abs(freq - q) <= 3 * sigma);
}

TEST_CASE("an undetected delayed attacker learns both payload bits") {
    Params p = fast_params();
    long undetected = 0;
    for (uint64_t seed = 0; seed < 3000 && undetected < 5; ++seed) {
        auto s = bb84_ot(1, 0, 1, p, ReceiverMode::DelayedMeasurement, seed);
        if (s.verdict != Bb84Session::Verdict::Accept) continue;
        ++undetected;
        CHECK(s.attacker_learned_both);
        CHECK(s.attacker_bits[0] == 1);
        CHECK(s.attacker_bits[1] == 0);
    }
    CHECK(undetected > 0);  // (3/4)^16 ~ 1%, reachable within the budget
}

TEST_CASE("without forcing the delayed attacker always wins") {
    Params p = fast_params();
    p.forcing = false;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto s = bb84_ot(0, 1, 0, p, ReceiverMode::DelayedMeasurement, seed);
        REQUIRE(s.verdict == Bb84Session::Verdict::Accept);
        CHECK(s.attacker_learned_both);
        CHECK(s.attacker_bits[0] == 0);
        CHECK(s.attacker_bits[1] == 1);
        CHECK(s.commitments == 0);
    }
}

TEST_CASE("too small usable sets abort") {
    Params p;
    p.num_positions = 32;
    p.test_fraction = 0.9;  // 28 tested, 4 left
    p.min_good = 8;
    p.with_log = false;
    auto s = bb84_ot(0, 0, 0, p, ReceiverMode::Honest, 1);
    CHECK(s.verdict == Bb84Session::Verdict::AbortTooFewGood);
}

TEST_CASE("parameter validation") {
    Params p;
    CHECK_THROWS_AS(bb84_ot(2, 0, 0, p, ReceiverMode::Honest, 1), std::invalid_argument);
    p.num_positions = 16;
    CHECK_THROWS_AS(bb84_ot(0, 0, 0, p, ReceiverMode::Honest, 1), std::invalid_argument);
    p = Params{};
    p.ambient = structures::MonotoneFamily::threshold(4, 2);
    CHECK_THROWS_AS(bb84_ot(0, 0, 0, p, ReceiverMode::Honest, 1), commit::InadmissibleStructure);
}

TEST_CASE("equal seeds reproduce the session") {
    Params p = fast_params();
    auto a = bb84_ot(1, 0, 1, p, ReceiverMode::Honest, 77);
    auto b = bb84_ot(1, 0, 1, p, ReceiverMode::Honest, 77);
    CHECK(a.sender_bits == b.sender_bits);
    CHECK(a.test_set == b.test_set);
    CHECK(a.receiver_output == b.receiver_output);
    CHECK(a.masked[0] == b.masked[0]);
}
