#pragma once

#include <map>
#include <set>
#include <unordered_map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmp/eventlog.hpp"
#include "qmp/sharing.hpp"

namespace qmp::commit {

using structures::MonotoneFamily;
using structures::PlayerId;
using structures::PlayerSet;

struct InadmissibleStructure : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Phase { DuringCommit, AfterCommit };

enum class Status { Committed, Unveiled, Aborted, DealerCaught };
std::string status_name(Status s);

// Per-player deviation. The set of non-honest players must sit inside one
// tolerated coalition.
struct Behavior {
    enum class Kind {
        Honest,
        LeakShares,             // broadcasts own replicas after dealing
        FalseComplainer,        // complains in every challenge round
        FalseComplainerInitial, // additionally complains about the initial shares
        UnveilFlipper,          // sender announces shares of flip_target instead
        CoalitionReconstructor, // pools `coalition` views after commit
    };
    Kind kind = Kind::Honest;
    BitString flip_target;
    PlayerSet coalition;
};

struct StrategyProfile {
    std::vector<Behavior> player;  // indexed by player id; empty means all honest
    // Sender-side mis-dealing of the payload bundle (drives the detection paths).
    std::vector<sharing::Tamper> dealer_tampers;
    // Players served no shares at all; they complain at the initial step.
    PlayerSet withheld;

    const Behavior& of(int p) const;
    PlayerSet cheaters(int n) const;
};

// Full record of one commitment run.
struct CommitSession {
    int n_players = 0;
    PlayerId sender = 0, receiver = 1;
    MonotoneFamily adversary;  // A
    MonotoneFamily access;     // Z, dual of A
    BitString mask;            // r, travels sender -> receiver once
    BitString payload;         // m
    sharing::ShareBundle bundle;  // sharing of m ^ r
    sharing::VssTranscript vss;
    PlayerSet complaint_set;                        // accumulated complainers
    std::vector<std::pair<int, int>> published;     // (player, tag) made public
    std::set<int> public_tags;                      // tags with a published value
    int loop_iterations = 0;
    Status status = Status::Committed;
    std::string abort_reason;
    BitString unveiled_value;
    // Robust variant: every qualified set keeps >= 2 players outside the
    // complaining/leaking coalition, and some replica stays unpublished.
    bool leak_guard_ok = true;
    std::vector<std::string> notes;  // reconstruction attempts etc.
    EventLog log;
};

// Partially robust commitment: mask to the receiver, masked payload shared
// with the dual access structure, k challenge rounds, abort on any complaint.
CommitSession commit_partial(const BitString& m, PlayerId sender, PlayerId receiver,
                             const MonotoneFamily& adversary, int k,
                             const StrategyProfile& strategies, uint64_t seed);

// Robust commitment: complaints accumulate; the shares of complaining players
// are published and the challenge rounds repeat until no new complaints. A
// complaint set outside the structure convicts the dealer; a sender-receiver
// conflict aborts the pair.
CommitSession commit_robust(const BitString& m, PlayerId sender, PlayerId receiver,
                            const MonotoneFamily& adversary, int k,
                            const StrategyProfile& strategies, uint64_t seed);

struct UnveilOutcome {
    bool accepted = false;
    BitString value;     // receiver's m on acceptance
    int bad_tag = -1;    // first contradicted replica otherwise
    int complainer = -1;
};

// Announced shares checked by every honest holder; on full confirmation the
// receiver strips the mask.
UnveilOutcome unveil(CommitSession& session, const std::vector<BitString>& announced,
                     const StrategyProfile& strategies);

// Shares the sender announces to open `target`: canonical values when target
// equals the committed payload, otherwise one replica flipped to match.
std::vector<BitString> announced_shares_for(const CommitSession& session, const BitString& target);

// --- exhaustive view distributions ---

struct SessionTemplate {
    MonotoneFamily adversary;
    PlayerId sender = 0, receiver = 1;
    int k = 1;
    int payload_len = 1;
    bool robust = false;
    StrategyProfile strategies;  // honest, or complainers/leakers for the robust claims
};

// View multiset of one coalition over every choice of protocol randomness,
// for the given payload bit. A view is what coalition members receive from
// outsiders plus all broadcasts. Equality is content-based.
using ViewDist = std::unordered_map<std::string, long>;
ViewDist coalition_view_distribution(const SessionTemplate& tmpl, PlayerSet coalition, Phase phase,
                                     int payload_bit);

// Batch form: one enumeration pass, many coalitions.
std::map<uint32_t, ViewDist> coalition_view_distributions(const SessionTemplate& tmpl,
                                                          const std::vector<PlayerSet>& coalitions,
                                                          Phase phase, int payload_bit);

}  // namespace qmp::commit
