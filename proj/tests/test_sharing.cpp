#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "qmp/sharing.hpp"

using namespace qmp;
using namespace qmp::sharing;
using structures::FamilyKind;
using structures::MonotoneFamily;
using structures::PlayerSet;

namespace {

MonotoneFamily two_of_three() { return dual_access(MonotoneFamily::threshold(3, 1)); }

// Test-side oracle: enumerate every valid sharing of a 1-bit secret directly
// from the XOR constraint, independent of deal().
std::vector<std::vector<int>> all_sharings(size_t num_tags, int secret) {
    std::vector<std::vector<int>> out;
    for (uint32_t free = 0; free < (1u << (num_tags - 1)); ++free) {
        std::vector<int> vals(num_tags);
        int acc = 0;
        for (size_t t = 0; t + 1 < num_tags; ++t) {
            vals[t] = (free >> t) & 1;
            acc ^= vals[t];
        }
        vals[num_tags - 1] = acc ^ secret;
        out.push_back(vals);
    }
    return out;
}

ShareBundle bundle_from_values(const MonotoneFamily& access, const std::vector<int>& vals) {
    ShareBundle b{access, 1, structures::max_unqualified(access), {}, {}};
    for (int v : vals) b.values.push_back(BitString::single(v));
    return b;
}

// Coalition view of one sharing plus optionally published tags.
std::string view_string(const ShareBundle& b, PlayerSet coalition,
                        const std::set<int>& published_tags) {
    std::string s;
    for (size_t t = 0; t < b.tags.size(); ++t) {
        bool visible = published_tags.count(static_cast<int>(t)) > 0;
        for (int p : coalition.members())
            if (b.holds(p, static_cast<int>(t))) visible = true;
        s += visible ? b.canonical_value(static_cast<int>(t)).to01() : "-";
    }
    return s;
}

}  // namespace

TEST_CASE("deal satisfies the bundle invariants") {
    Rng rng(7);
    auto access = two_of_three();
    auto b = deal(BitString::single(1), access, rng);

    REQUIRE(b.tags.size() == 3);
    BitString acc(1);
    for (size_t t = 0; t < b.tags.size(); ++t) acc ^= b.canonical_value(static_cast<int>(t));
    CHECK(acc == BitString::single(1));

    // player 0 holds the replicas tagged {1} and {2}
    auto view = b.view_of(0);
    REQUIRE(view.size() == 2);
    CHECK(view[0].tag == PlayerSet::of({1}));
    CHECK(view[1].tag == PlayerSet::of({2}));
}

TEST_CASE("deal with all-zero randomness shares zero as all zeros") {
    EnumBits zeros(0, 64);
    auto b = deal(BitString::single(0), two_of_three(), zeros);
    for (size_t t = 0; t < b.tags.size(); ++t)
        CHECK(b.canonical_value(static_cast<int>(t)).is_zero());
}

TEST_CASE("unanimous access structure gives each player one replica") {
    Rng rng(3);
    MonotoneFamily all_of_two(2, FamilyKind::Upward, {PlayerSet::of({0, 1})});
    auto b = deal(BitString::single(1), all_of_two, rng);
    CHECK(b.tags == std::vector<PlayerSet>{PlayerSet::of({0}), PlayerSet::of({1})});
    CHECK(b.view_of(0).size() == 1);
    CHECK(b.view_of(1).size() == 1);
}

TEST_CASE("degenerate access structure is rejected") {
    Rng rng(1);
    MonotoneFamily degenerate(2, FamilyKind::Upward, {PlayerSet{}});
    CHECK_THROWS_AS(deal(BitString::single(0), degenerate, rng), std::invalid_argument);
}

TEST_CASE("reconstruction by qualified and unqualified coalitions") {
    Rng rng(11);
    for (int secret = 0; secret <= 1; ++secret) {
        auto b = deal(BitString::single(secret), two_of_three(), rng);
        auto ok = reconstruct(b, PlayerSet::of({0, 1}));
        REQUIRE(ok.status == ReconstructResult::Status::Ok);
        CHECK(ok.value == BitString::single(secret));

        auto nq = reconstruct(b, PlayerSet::of({0}));
        CHECK(nq.status == ReconstructResult::Status::NotQualified);
    }
}

TEST_CASE("conflicting copies are detected") {
    Rng rng(13);
    auto b = deal(BitString::single(1), two_of_three(), rng);
    // corrupt player 1's copy of the first replica it holds
    for (size_t t = 0; t < b.tags.size(); ++t)
        if (b.holds(1, static_cast<int>(t))) {
            const int ti = static_cast<int>(t);
            b.set_copy(ti, 1, b.value_of(ti, 1) ^ BitString::single(1));
            break;
        }
    auto r = reconstruct(b, PlayerSet::of({0, 1, 2}));
    CHECK(r.status == ReconstructResult::Status::Inconsistent);
}

TEST_CASE("xor_combine is a sharing homomorphism") {
    Rng rng(17);
    auto access = two_of_three();
    for (int i = 0; i < 20; ++i) {
        BitString m = rng.bits(4), z = rng.bits(4);
        auto bm = deal(m, access, rng);
        auto bz = deal(z, access, rng);
        auto bc = xor_combine(bm, bz);
        auto rec = reconstruct(bc, PlayerSet::of({0, 1}));
        REQUIRE(rec.status == ReconstructResult::Status::Ok);
        CHECK(rec.value == (m ^ z));
    }
    // x ^ x reconstructs zero
    auto bx = deal(rng.bits(4), access, rng);
    auto zero = reconstruct(xor_combine(bx, bx), PlayerSet::of({1, 2}));
    CHECK(zero.value.is_zero());

    auto other = deal(rng.bits(3), access, rng);
    CHECK_THROWS_AS(xor_combine(bx, other), std::invalid_argument);
}

TEST_CASE("perfect privacy: unqualified views are secret-independent (exhaustive)") {
    std::vector<MonotoneFamily> adversaries = {
        MonotoneFamily::threshold(3, 1),
        MonotoneFamily::threshold(4, 1),
        MonotoneFamily(4, FamilyKind::Downward, {PlayerSet::of({0, 1}), PlayerSet::of({2}), PlayerSet::of({3})}),
    };
    for (const auto& a : adversaries) {
        auto access = dual_access(a);
        auto tags = structures::max_unqualified(access);
        for (uint32_t cm = 0; cm < (1u << a.n()); ++cm) {
            PlayerSet c{cm};
            if (access.contains(c)) continue;  // qualified coalitions excluded
            std::multiset<std::string> views[2];
            for (int secret = 0; secret <= 1; ++secret)
                for (const auto& vals : all_sharings(tags.size(), secret))
                    views[secret].insert(view_string(bundle_from_values(access, vals), c, {}));
            CHECK(views[0] == views[1]);
        }
    }
}

TEST_CASE("completeness: qualified coalitions always reconstruct (exhaustive)") {
    auto a = MonotoneFamily::threshold(4, 1);
    auto access = dual_access(a);
    auto tags = structures::max_unqualified(access);
    for (int secret = 0; secret <= 1; ++secret)
        for (const auto& vals : all_sharings(tags.size(), secret))
            for (uint32_t cm = 0; cm < 16; ++cm) {
                PlayerSet c{cm};
                if (!access.contains(c)) continue;
                auto r = reconstruct(bundle_from_values(access, vals), c);
                REQUIRE(r.status == ReconstructResult::Status::Ok);
                CHECK(r.value == BitString::single(secret));
            }
}

TEST_CASE("deal lands inside the oracle sharing set") {
    Rng rng(23);
    auto access = two_of_three();
    auto oracle = all_sharings(3, 1);
    std::set<std::vector<int>> valid(oracle.begin(), oracle.end());
    for (int i = 0; i < 50; ++i) {
        auto b = deal(BitString::single(1), access, rng);
        std::vector<int> vals;
        for (size_t t = 0; t < b.tags.size(); ++t)
            vals.push_back(b.canonical_value(static_cast<int>(t)).bit(0));
        CHECK(valid.count(vals) == 1);
    }
}

TEST_CASE("vss accepts honest dealers") {
    Rng rng(31);
    for (int k : {0, 1, 8}) {
        auto r = vss_deal(BitString::single(1), two_of_three(), k, {}, ChallengeSource::DesignatedVerifier, rng);
        CHECK(r.accepted);
        CHECK(r.transcript.rounds.size() == static_cast<size_t>(k));
    }
}

TEST_CASE("vss catches an inconsistent dealer at the analytic rate") {
    const int k = 8;
    const long trials = 20000;
    const double p = std::pow(2.0, -k);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));

    Rng rng(37);
    long passed = 0;
    DealerBehavior cheat;
    cheat.main_tampers.push_back({0, 1, BitString::single(1)});  // player 1's copy of replica 0
    for (long i = 0; i < trials; ++i) {
        auto r = vss_deal(BitString::single(1), two_of_three(), k, cheat,
                          ChallengeSource::DesignatedVerifier, rng);
        if (r.accepted) ++passed;
    }
    const double freq = static_cast<double>(passed) / static_cast<double>(trials);
    CHECK(freq <= p + 3 * sigma);
    CHECK(passed > 0);  // the 2^-k branch is reachable
}

TEST_CASE("vss public-coin mode records its source") {
    Rng rng(41);
    auto r = vss_deal(BitString::single(0), two_of_three(), 3, {}, ChallengeSource::PublicCoin, rng);
    CHECK(r.transcript.source == ChallengeSource::PublicCoin);
    CHECK(r.accepted);
}

TEST_CASE("leak of one coalition keeps the secret shared among two honest players") {
    // Structural reading of the robust-admissibility guarantee.
    for (auto a : {MonotoneFamily::threshold(4, 1), MonotoneFamily::threshold(5, 1)}) {
        REQUIRE(robust_admissible(a));
        auto access = dual_access(a);
        const auto member = a.membership_bitmap();
        for (uint32_t am = 0; am < (1u << a.n()); ++am) {
            if (!member[am]) continue;
            PlayerSet leaker{am};
            for (PlayerSet z : access.extremal()) CHECK(z.minus(leaker).count() >= 2);
        }
    }
}

TEST_CASE("single curious player plus a leaking coalition stays ignorant (exhaustive)") {
    auto a = MonotoneFamily::threshold(4, 1);
    auto access = dual_access(a);
    auto tags = structures::max_unqualified(access);
    for (PlayerSet leaker : a.extremal()) {
        std::set<int> published;
        for (size_t t = 0; t < tags.size(); ++t)
            for (int p : leaker.members())
                if (!tags[t].contains(p)) published.insert(static_cast<int>(t));
        for (int p = 0; p < a.n(); ++p) {
            if (leaker.contains(p)) continue;
            std::multiset<std::string> views[2];
            for (int secret = 0; secret <= 1; ++secret)
                for (const auto& vals : all_sharings(tags.size(), secret))
                    views[secret].insert(
                        view_string(bundle_from_values(access, vals), PlayerSet::single(p), published));
            CHECK(views[0] == views[1]);
        }
    }
}

TEST_CASE("bundle serialization is byte-exact for equal seeds") {
    auto run = [] {
        Rng rng(99);
        return serialize_bundle(deal(BitString::from01("1011"), two_of_three(), rng));
    };
    const std::string a = run(), b = run();
    CHECK(a == b);
    CHECK(a.find("replica ") == 0);
    CHECK(a.find("holds 0 ") != std::string::npos);
}
