#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmp/bits.hpp"
#include "qmp/rng.hpp"
#include "qmp/structures.hpp"

namespace qmp::sharing {

using structures::MonotoneFamily;
using structures::PlayerSet;

using SecretValue = BitString;

// One replica of the secret: a value tagged by the maximal unqualified set
// that must not see it. Held by every player outside the tag.
struct Replica {
    PlayerSet tag;
    BitString value;
};

// Replicated sharing of a bitstring: per-tag values whose XOR is the secret.
// Copies agree across holders in an honest deal; tampered copies live in a
// sparse override list.
struct ShareBundle {
    MonotoneFamily access;          // upward family the bundle was dealt for
    int secret_len = 0;
    std::vector<PlayerSet> tags;    // maximal unqualified sets, ascending mask
    std::vector<BitString> values;  // dealer's value per tag

    struct Override {
        int tag;
        int player;
        BitString value;
    };
    std::vector<Override> overrides;

    int n() const { return access.n(); }
    bool holds(int player, int t) const { return !tags[static_cast<size_t>(t)].contains(player); }
    const BitString& canonical_value(int t) const { return values[static_cast<size_t>(t)]; }
    // Player p's copy of replica t (meaningful iff holds(p, t)).
    const BitString& value_of(int t, int player) const;
    void set_copy(int t, int player, BitString v);
    // Replicas player p holds, as (tag, value) pairs.
    std::vector<Replica> view_of(int player) const;
};

// Uniform sharing of `secret`: every replica value uniform subject to the
// XOR constraint.
ShareBundle deal(const SecretValue& secret, const MonotoneFamily& access, BitSource& rng);

struct ReconstructResult {
    enum class Status { Ok, NotQualified, Inconsistent };
    Status status;
    SecretValue value;  // valid iff status == Ok
    int bad_tag = -1;   // first missing or conflicting tag otherwise
};
// Reconstruction from the replicas held by members of `coalition`.
ReconstructResult reconstruct(const ShareBundle& bundle, PlayerSet coalition);

// Replica-wise XOR; requires equal access structure and secret length.
ShareBundle xor_combine(const ShareBundle& a, const ShareBundle& b);

// --- verifiable secret sharing (cut and choose) ---

enum class ChallengeSource { DesignatedVerifier, PublicCoin };

// One player's copy of one replica gets XORed with `delta`.
struct Tamper {
    int tag_index;
    int player;
    BitString delta;
};

struct DealerBehavior {
    std::vector<Tamper> main_tampers;  // applied to the dealt secret bundle
    std::vector<Tamper> aux_tampers;   // applied to every auxiliary bundle
};

struct VssRound {
    int challenge = 0;                  // 0: open z, 1: open z xor secret
    std::vector<BitString> published;   // per tag, broadcast by the dealer
    PlayerSet complainers;
};

struct VssTranscript {
    ChallengeSource source = ChallengeSource::DesignatedVerifier;
    std::vector<VssRound> rounds;
    bool accepted = true;
    int first_bad_round = -1;
};

struct VssResult {
    ShareBundle bundle;
    VssTranscript transcript;
    bool accepted = true;
};

// Deals `secret`, then runs k challenge rounds: fresh random z each round,
// verifier picks a bit, dealer opens z or z^secret, every holder checks the
// published value against its own copies. Accept iff nobody ever complains.
VssResult vss_deal(const SecretValue& secret, const MonotoneFamily& access, int k,
                   const DealerBehavior& dealer, ChallengeSource source, BitSource& rng);

// Single round against an existing bundle; used by the commitment layer.
// Draws the fresh z, then the challenge, in that order; `z_out` receives the
// auxiliary bundle when callers need to place it in a transcript.
VssRound vss_round(const ShareBundle& main_bundle, const DealerBehavior& dealer, BitSource& rng,
                   ShareBundle* z_out = nullptr);

// Transcript serialization: `replica <tag-bitmask> <hex>` then
// `holds <player> <tag-bitmask>` lines, byte-exact for equal deals.
std::string serialize_bundle(const ShareBundle& bundle);

}  // namespace qmp::sharing
