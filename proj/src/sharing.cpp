#include "qmp/sharing.hpp"

#include <stdexcept>

namespace qmp::sharing {

const BitString& ShareBundle::value_of(int t, int player) const {
    for (const Override& o : overrides)
        if (o.tag == t && o.player == player) return o.value;
    return values[static_cast<size_t>(t)];
}

void ShareBundle::set_copy(int t, int player, BitString v) {
    for (Override& o : overrides)
        if (o.tag == t && o.player == player) {
            o.value = std::move(v);
            return;
        }
    overrides.push_back({t, player, std::move(v)});
}

std::vector<Replica> ShareBundle::view_of(int player) const {
    std::vector<Replica> v;
    for (size_t t = 0; t < tags.size(); ++t)
        if (holds(player, static_cast<int>(t)))
            v.push_back({tags[t], value_of(static_cast<int>(t), player)});
    return v;
}

ShareBundle deal(const SecretValue& secret, const MonotoneFamily& access, BitSource& rng) {
    if (access.kind() != structures::FamilyKind::Upward)
        throw std::invalid_argument("deal expects an access structure");
    auto tags = structures::max_unqualified(access);
    if (tags.empty())
        throw std::invalid_argument("degenerate access structure: empty set qualified");

    ShareBundle b{access, secret.size(), std::move(tags), {}, {}};
    BitString acc(secret.size());
    b.values.reserve(b.tags.size());
    for (size_t t = 0; t + 1 < b.tags.size(); ++t) {
        b.values.push_back(rng.bits(secret.size()));
        acc ^= b.values.back();
    }
    b.values.push_back(acc ^ secret);  // XOR over all replicas equals the secret
    return b;
}

ReconstructResult reconstruct(const ShareBundle& bundle, PlayerSet coalition) {
    SecretValue out(bundle.secret_len);
    for (size_t t = 0; t < bundle.tags.size(); ++t) {
        const BitString* seen = nullptr;
        for (int p : coalition.members()) {
            if (!bundle.holds(p, static_cast<int>(t))) continue;
            const BitString& v = bundle.value_of(static_cast<int>(t), p);
            if (!seen) {
                seen = &v;
            } else if (*seen != v) {
                return {ReconstructResult::Status::Inconsistent, {}, static_cast<int>(t)};
            }
        }
        if (!seen)  // coalition inside the tag set: unqualified
            return {ReconstructResult::Status::NotQualified, {}, static_cast<int>(t)};
        out ^= *seen;
    }
    return {ReconstructResult::Status::Ok, out, -1};
}

ShareBundle xor_combine(const ShareBundle& a, const ShareBundle& b) {
    if (!(a.access == b.access) || a.secret_len != b.secret_len || a.tags != b.tags)
        throw std::invalid_argument("bundle mismatch: access structure or length differ");
    ShareBundle out = a;
    for (size_t t = 0; t < a.tags.size(); ++t) out.values[t] ^= b.values[t];
    out.overrides.clear();
    auto merge = [&](const ShareBundle& src) {
        for (const auto& o : src.overrides)
            if (src.holds(o.player, o.tag))
                out.set_copy(o.tag, o.player, a.value_of(o.tag, o.player) ^ b.value_of(o.tag, o.player));
    };
    merge(a);
    merge(b);
    return out;
}

namespace {

void apply_tampers(ShareBundle& b, const std::vector<Tamper>& tampers) {
    for (const Tamper& t : tampers) {
        if (t.tag_index < 0 || t.tag_index >= static_cast<int>(b.tags.size()))
            throw std::invalid_argument("tamper names a nonexistent replica");
        if (!b.holds(t.player, t.tag_index))
            throw std::invalid_argument("tampered player does not hold that replica");
        b.set_copy(t.tag_index, t.player, b.value_of(t.tag_index, t.player) ^ t.delta);
    }
}

}  // namespace

VssRound vss_round(const ShareBundle& main_bundle, const DealerBehavior& dealer, BitSource& rng,
                   ShareBundle* z_out) {
    // Fresh random z: a uniform secret under a uniform sharing is a uniform
    // value per tag.
    ShareBundle z = deal(rng.bits(main_bundle.secret_len), main_bundle.access, rng);
    apply_tampers(z, dealer.aux_tampers);
    const int challenge = rng.bit();  // verifier flips after z is dealt

    VssRound round;
    round.challenge = challenge;
    // The dealer publishes its own values; tampered copies live only on the
    // victims' side.
    round.published.reserve(z.tags.size());
    for (size_t t = 0; t < z.tags.size(); ++t) {
        BitString v = z.canonical_value(static_cast<int>(t));
        if (challenge) v ^= main_bundle.canonical_value(static_cast<int>(t));
        round.published.push_back(std::move(v));
    }
    // Every holder checks the published value against its copies.
    for (int p = 0; p < main_bundle.n(); ++p) {
        for (size_t t = 0; t < main_bundle.tags.size(); ++t) {
            if (!main_bundle.holds(p, static_cast<int>(t))) continue;
            BitString expect = z.value_of(static_cast<int>(t), p);
            if (challenge) expect ^= main_bundle.value_of(static_cast<int>(t), p);
            if (expect != round.published[t]) {
                round.complainers = round.complainers.with(p);
                break;
            }
        }
    }
    if (z_out) *z_out = std::move(z);
    return round;
}

VssResult vss_deal(const SecretValue& secret, const MonotoneFamily& access, int k,
                   const DealerBehavior& dealer, ChallengeSource source, BitSource& rng) {
    if (k < 0) throw std::invalid_argument("round count must be nonnegative");
    VssResult r;
    r.bundle = deal(secret, access, rng);
    apply_tampers(r.bundle, dealer.main_tampers);
    r.transcript.source = source;
    for (int j = 0; j < k; ++j) {
        VssRound round = vss_round(r.bundle, dealer, rng);
        const bool bad = !round.complainers.empty();
        r.transcript.rounds.push_back(std::move(round));
        if (bad && r.transcript.accepted) {
            r.transcript.accepted = false;
            r.transcript.first_bad_round = j;
        }
    }
    r.accepted = r.transcript.accepted;
    return r;
}

std::string serialize_bundle(const ShareBundle& bundle) {
    std::string out;
    for (size_t t = 0; t < bundle.tags.size(); ++t) {
        out += "replica " + std::to_string(bundle.tags[t].mask) + " " +
               bundle.canonical_value(static_cast<int>(t)).to_hex() + "\n";
    }
    for (int p = 0; p < bundle.n(); ++p)
        for (size_t t = 0; t < bundle.tags.size(); ++t)
            if (bundle.holds(p, static_cast<int>(t)))
                out += "holds " + std::to_string(p) + " " + std::to_string(bundle.tags[t].mask) +
                       "\n";
    return out;
}

}  // namespace qmp::sharing
