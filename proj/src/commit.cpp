#include "qmp/commit.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <thread>
#include <unordered_map>

#include "qmp/rng.hpp"

namespace qmp::commit {

std::string status_name(Status s) {
    switch (s) {
        case Status::Committed: return "committed";
        case Status::Unveiled: return "unveiled";
        case Status::Aborted: return "aborted";
        case Status::DealerCaught: return "dealer-caught";
    }
    return "?";
}

namespace {
const Behavior kHonest{};
}

const Behavior& StrategyProfile::of(int p) const {
    if (player.empty()) return kHonest;
    return player[static_cast<size_t>(p)];
}

PlayerSet StrategyProfile::cheaters(int n) const {
    PlayerSet set;
    for (int p = 0; p < n; ++p) {
        switch (of(p).kind) {
            case Behavior::Kind::LeakShares:
            case Behavior::Kind::FalseComplainer:
            case Behavior::Kind::FalseComplainerInitial:
            case Behavior::Kind::UnveilFlipper:
                set = set.with(p);
                break;
            case Behavior::Kind::Honest:
            case Behavior::Kind::CoalitionReconstructor:
                // pooling views after termination is not an in-protocol deviation
                break;
        }
    }
    return set;
}

namespace {

using sharing::ShareBundle;

struct TraceEvent {
    int recipient;  // -1 broadcast
    char label;
    std::string data;
};
using Trace = std::vector<TraceEvent>;

std::string copies_string(const ShareBundle& b, int player) {
    std::string s;
    s.reserve(b.tags.size() * static_cast<size_t>(b.secret_len));
    for (size_t t = 0; t < b.tags.size(); ++t) {
        if (b.holds(player, static_cast<int>(t)))
            s += b.value_of(static_cast<int>(t), player).to01();
        else
            s.push_back('-');
    }
    return s;
}

// One commit-phase execution. Drives both protocol runs (session != null)
// and exhaustive view enumeration (trace != null, honest dealer).
struct PhaseRun {
    const BitString& payload;
    PlayerId sender, receiver;
    const MonotoneFamily& adversary;
    int k;
    bool robust;
    const StrategyProfile& strategies;
    BitSource& src;
    Trace* trace = nullptr;
    CommitSession* s = nullptr;

    MonotoneFamily access = {};
    ShareBundle bundle = {};
    PlayerSet complaints = {};
    std::set<std::pair<int, int>> published_pairs = {};
    int round_no = 0;

    void emit(int from, int to, char label, std::string_view kind, const std::string& data) {
        if (trace) trace->push_back({to, label, data});
        if (s) s->log.msg(round_no, from, to, kind, data);
    }

    void emit_complaints(PlayerSet set) {
        if (trace) trace->push_back({-1, 'k', set.str()});
        if (s)
            for (int p : set.members()) s->log.msg(round_no, p, -1, "complaint", "");
    }

    int n() const { return adversary.n(); }

    bool is_false_complainer(int p, bool initial) const {
        const auto kind = strategies.of(p).kind;
        if (initial) return kind == Behavior::Kind::FalseComplainerInitial;
        return kind == Behavior::Kind::FalseComplainer ||
               kind == Behavior::Kind::FalseComplainerInitial;
    }

    void publish_player(int p, char label, std::string_view kind) {
        for (size_t t = 0; t < bundle.tags.size(); ++t) {
            if (!bundle.holds(p, static_cast<int>(t))) continue;
            if (!published_pairs.insert({p, static_cast<int>(t)}).second) continue;
            // Leakers reveal their own copies; the dealer republishes what it sent.
            const BitString& v = label == 'l' ? bundle.value_of(static_cast<int>(t), p)
                                              : bundle.canonical_value(static_cast<int>(t));
            emit(label == 'l' ? p : sender, -1, label, kind,
                 std::to_string(p) + "/" + std::to_string(bundle.tags[t].mask) + "=" + v.to01());
            if (s) {
                s->published.emplace_back(p, static_cast<int>(t));
                s->public_tags.insert(static_cast<int>(t));
            }
        }
    }

    void finish(Status st, const std::string& reason) {
        if (s) {
            s->status = st;
            s->abort_reason = reason;
            s->bundle = bundle;
            s->complaint_set = complaints;
            s->log.verdict(status_name(st) + (reason.empty() ? "" : " " + reason));
        }
    }

    PlayerSet run_vss_round(const sharing::DealerBehavior& dealer) {
        ShareBundle z;
        auto round = sharing::vss_round(bundle, dealer, src, &z);
        ++round_no;
        for (int p = 0; p < n(); ++p)
            if (p != sender) emit(sender, p, 'z', "aux-shares", copies_string(z, p));
        emit(receiver, -1, 'c', "challenge", std::to_string(round.challenge));
        std::string opened;
        for (const BitString& v : round.published) opened += v.to01();
        emit(sender, -1, 'o', round.challenge ? "open-mix" : "open-aux", opened);

        PlayerSet complainers = round.complainers;
        for (int p = 0; p < n(); ++p)
            if (is_false_complainer(p, false)) complainers = complainers.with(p);
        emit_complaints(complainers);
        if (s) {
            s->vss.rounds.push_back(round);
            if (!complainers.empty() && s->vss.accepted) {
                s->vss.accepted = false;
                s->vss.first_bad_round = static_cast<int>(s->vss.rounds.size()) - 1;
            }
        }
        return complainers;
    }

    void run() {
        access = structures::dual_access(adversary);
        const int len = payload.size();

        BitString mask = src.bits(len);
        emit(sender, receiver, 'r', "mask", mask.to01());
        if (s) s->mask = mask;

        bundle = sharing::deal(payload ^ mask, access, src);
        for (const auto& t : strategies.dealer_tampers)
            bundle.set_copy(t.tag_index, t.player, bundle.value_of(t.tag_index, t.player) ^ t.delta);

        for (int p = 0; p < n(); ++p) {
            if (p == sender) continue;
            emit(sender, p, 's', "shares",
                 strategies.withheld.contains(p) ? std::string("withheld") : copies_string(bundle, p));
        }
        for (int p = 0; p < n(); ++p)
            if (strategies.of(p).kind == Behavior::Kind::LeakShares)
                publish_player(p, 'l', "leak");

        // Initial complaints: withheld shares plus eager false complainers.
        PlayerSet initial = strategies.withheld;
        for (int p = 0; p < n(); ++p)
            if (is_false_complainer(p, true)) initial = initial.with(p);
        emit_complaints(initial);
        complaints = initial;

        if (!robust) {
            if (!initial.empty()) {
                finish(Status::Aborted, "conflict");
                return;
            }
            sharing::DealerBehavior dealer;  // cheating already baked into the bundle copies
            for (int j = 0; j < k; ++j) {
                PlayerSet complainers = run_vss_round(dealer);
                if (!complainers.empty()) {
                    complaints = complaints.unite(complainers);
                    finish(Status::Aborted, "conflict");
                    return;
                }
            }
            finish(Status::Committed, "");
            return;
        }

        // Robust variant: publish the disputed shares and repeat the challenge
        // rounds until the complainer set stops growing.
        // Withheld players now read their values off the published broadcast.
        for (int p : initial.members()) publish_player(p, 'p', "publish");

        PlayerSet old = complaints;
        int iterations = 0;
        while (true) {
            ++iterations;
            if (iterations > n() + 1)  // the complainer set grows strictly
                throw std::logic_error("complaint loop failed to terminate");
            sharing::DealerBehavior dealer;
            for (int j = 0; j < k; ++j)
                complaints = complaints.unite(run_vss_round(dealer));
            if (!adversary.contains(complaints)) {
                if (s) s->loop_iterations = iterations;
                finish(Status::DealerCaught, "");
                return;
            }
            if (complaints.contains(receiver)) {
                if (s) s->loop_iterations = iterations;
                finish(Status::Aborted, "pair-conflict");
                return;
            }
            for (int p : complaints.members()) publish_player(p, 'p', "publish");
            if (complaints == old) break;
            old = complaints;
        }
        if (s) {
            s->loop_iterations = iterations;
            // Disruption guard: qualified sets keep two players outside the
            // complaining/leaking coalition and some replica stays private.
            PlayerSet exposed = complaints;
            for (int p = 0; p < n(); ++p)
                if (strategies.of(p).kind == Behavior::Kind::LeakShares) exposed = exposed.with(p);
            bool ok = true;
            for (PlayerSet zset : access.extremal())
                if (zset.minus(exposed).count() < 2) ok = false;
            if (s->public_tags.size() >= bundle.tags.size() && !bundle.tags.empty()) ok = false;
            s->leak_guard_ok = ok;
        }
        finish(Status::Committed, "");
    }
};

void validate_common(const BitString& m, PlayerId sender, PlayerId receiver,
                     const MonotoneFamily& adversary, int k, const StrategyProfile& strategies) {
    const int n = adversary.n();
    if (sender == receiver || sender < 0 || receiver < 0 || sender >= n || receiver >= n)
        throw std::invalid_argument("sender and receiver must be distinct players");
    if (k < 0) throw std::invalid_argument("challenge round count must be nonnegative");
    if (m.size() < 1) throw std::invalid_argument("payload must be at least one bit");
    if (!strategies.player.empty() && strategies.player.size() != static_cast<size_t>(n))
        throw std::invalid_argument("strategy profile size mismatch");
    PlayerSet cheaters = strategies.cheaters(n);
    if (!strategies.dealer_tampers.empty() || !strategies.withheld.empty())
        cheaters = cheaters.with(sender);
    if (!adversary.contains(cheaters))
        throw std::invalid_argument("cheater set " + cheaters.str() +
                                    " is not a tolerated coalition");
}

CommitSession start_session(const BitString& m, PlayerId sender, PlayerId receiver,
                            const MonotoneFamily& adversary) {
    CommitSession s;
    s.n_players = adversary.n();
    s.sender = sender;
    s.receiver = receiver;
    s.adversary = adversary;
    s.access = structures::dual_access(adversary);
    s.payload = m;
    return s;
}

void note_reconstructions(CommitSession& s, const StrategyProfile& strategies) {
    if (s.status != Status::Committed) return;
    for (int p = 0; p < s.n_players; ++p) {
        const Behavior& b = strategies.of(p);
        if (b.kind != Behavior::Kind::CoalitionReconstructor) continue;
        // Pool the coalition's replicas plus anything public.
        BitString acc(s.payload.size());
        bool complete = true;
        for (size_t t = 0; t < s.bundle.tags.size(); ++t) {
            bool have = s.public_tags.count(static_cast<int>(t)) > 0;
            for (int q : b.coalition.members())
                if (s.bundle.holds(q, static_cast<int>(t))) have = true;
            if (!have) {
                complete = false;
                break;
            }
            acc ^= s.bundle.canonical_value(static_cast<int>(t));
        }
        std::string note = "reconstruct " + b.coalition.str() + " ";
        if (!complete)
            note += "not-qualified";
        else if (b.coalition.contains(s.receiver))
            note += "value " + (acc ^ s.mask).to01();
        else
            note += "masked " + acc.to01();
        s.notes.push_back(note);
        s.log.note(note);
    }
}

CommitSession run_protocol(const BitString& m, PlayerId sender, PlayerId receiver,
                           const MonotoneFamily& adversary, int k,
                           const StrategyProfile& strategies, uint64_t seed, bool robust) {
    validate_common(m, sender, receiver, adversary, k, strategies);
    CommitSession s = start_session(m, sender, receiver, adversary);
    Rng rng(seed);
    PhaseRun run{m, sender, receiver, adversary, k, robust, strategies, rng};
    run.s = &s;
    run.run();
    note_reconstructions(s, strategies);
    return s;
}

}  // namespace

CommitSession commit_partial(const BitString& m, PlayerId sender, PlayerId receiver,
                             const MonotoneFamily& adversary, int k,
                             const StrategyProfile& strategies, uint64_t seed) {
    if (!structures::partially_robust_admissible(adversary))
        throw InadmissibleStructure("two tolerated coalitions cover the player set");
    return run_protocol(m, sender, receiver, adversary, k, strategies, seed, false);
}

CommitSession commit_robust(const BitString& m, PlayerId sender, PlayerId receiver,
                            const MonotoneFamily& adversary, int k,
                            const StrategyProfile& strategies, uint64_t seed) {
    if (!structures::robust_admissible(adversary))
        throw InadmissibleStructure("two tolerated coalitions cover all players but one");
    return run_protocol(m, sender, receiver, adversary, k, strategies, seed, true);
}

std::vector<BitString> announced_shares_for(const CommitSession& session, const BitString& target) {
    std::vector<BitString> announced = session.bundle.values;
    if (target == session.payload) return announced;
    // Flip the replica with the fewest honest holders left to contradict it.
    const PlayerSet cheaters = PlayerSet{}.with(session.sender);
    size_t best = 0;
    int best_honest = session.n_players + 1;
    for (size_t t = 0; t < session.bundle.tags.size(); ++t) {
        const int honest_holders =
            session.bundle.tags[t].complement(session.n_players).minus(cheaters).count();
        if (honest_holders < best_honest) {
            best_honest = honest_holders;
            best = t;
        }
    }
    announced[best] ^= target ^ session.payload;
    return announced;
}

UnveilOutcome unveil(CommitSession& session, const std::vector<BitString>& announced,
                     const StrategyProfile& strategies) {
    if (session.status != Status::Committed)
        throw std::invalid_argument("unveil requires a committed session");
    if (announced.size() != session.bundle.tags.size())
        throw std::invalid_argument("announced share count mismatch");

    std::string all;
    for (const BitString& v : announced) all += v.to01();
    session.log.msg(0, session.sender, -1, "unveil", all);

    const PlayerSet cheaters = strategies.cheaters(session.n_players).with(session.sender);
    UnveilOutcome out;
    for (int p = 0; p < session.n_players; ++p) {
        if (cheaters.contains(p)) continue;  // colluders stay silent
        for (size_t t = 0; t < session.bundle.tags.size(); ++t) {
            if (!session.bundle.holds(p, static_cast<int>(t))) continue;
            if (announced[t] != session.bundle.value_of(static_cast<int>(t), p)) {
                out.accepted = false;
                out.bad_tag = static_cast<int>(t);
                out.complainer = p;
                session.log.msg(0, p, -1, "contradiction", std::to_string(t));
                session.log.verdict("rejected");
                return out;
            }
        }
    }
    BitString acc(session.payload.size());
    for (const BitString& v : announced) acc ^= v;
    out.accepted = true;
    out.value = acc ^ session.mask;
    session.status = Status::Unveiled;
    session.unveiled_value = out.value;
    session.log.verdict("unveiled " + out.value.to01());
    return out;
}

std::map<uint32_t, ViewDist> coalition_view_distributions(const SessionTemplate& tmpl,
                                                          const std::vector<PlayerSet>& coalitions,
                                                          Phase phase, int payload_bit) {
    (void)phase;  // views span the whole commit phase; the phase picks the claim
    if (tmpl.adversary.n() > 4 || tmpl.payload_len != 1)
        throw std::invalid_argument("view enumeration is limited to n <= 4 and 1-bit payloads");
    if (!tmpl.strategies.dealer_tampers.empty() || !tmpl.strategies.withheld.empty())
        throw std::invalid_argument("view enumeration expects an honest dealer");

    const BitString m = BitString::single(payload_bit);

    CountingBits counter;
    {
        PhaseRun probe{m,        tmpl.sender,     tmpl.receiver, tmpl.adversary,
                       tmpl.k,   tmpl.robust,     tmpl.strategies, counter};
        probe.run();
    }
    const long bits = counter.count();
    if (bits > 26) throw std::invalid_argument("view enumeration infeasible: too much randomness");

    // Disjoint word ranges per worker; counts merge commutatively, so the
    // result is independent of the thread count.
    // Worker count is an environment knob: enumeration sweeps merge
    // commutatively, so any count gives identical distributions.
    unsigned workers = 1;
    if (const char* env = std::getenv("QMP_ENUM_WORKERS"))
        workers = static_cast<unsigned>(std::max(1, std::atoi(env)));
    std::vector<std::vector<ViewDist>> acc(workers, std::vector<ViewDist>(coalitions.size()));

    auto sweep = [&](unsigned w) {
        std::string view;
        const uint64_t total = 1ull << bits;
        const uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
        for (uint64_t word = lo; word < hi; ++word) {
            EnumBits src(word, static_cast<int>(bits));
            Trace trace;
            PhaseRun run{m,      tmpl.sender, tmpl.receiver, tmpl.adversary,
                         tmpl.k, tmpl.robust, tmpl.strategies, src};
            run.trace = &trace;
            run.run();
            for (size_t ci = 0; ci < coalitions.size(); ++ci) {
                const PlayerSet c = coalitions[ci];
                view.clear();
                for (const TraceEvent& ev : trace) {
                    if (ev.recipient >= 0 && !c.contains(ev.recipient)) continue;
                    view.push_back(ev.label);
                    view += ev.data;
                    view.push_back(';');
                }
                ++acc[w][ci][view];
            }
        }
    };
    if (workers == 1) {
        sweep(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(sweep, w);
        for (auto& th : pool) th.join();
    }

    std::map<uint32_t, ViewDist> dists;
    for (size_t ci = 0; ci < coalitions.size(); ++ci) {
        ViewDist merged = std::move(acc[0][ci]);
        for (unsigned w = 1; w < workers; ++w)
            for (const auto& [view_key, count] : acc[w][ci]) merged[view_key] += count;
        dists[coalitions[ci].mask] = std::move(merged);
    }
    return dists;
}

ViewDist coalition_view_distribution(const SessionTemplate& tmpl, PlayerSet coalition, Phase phase,
                                     int payload_bit) {
    return coalition_view_distributions(tmpl, {coalition}, phase, payload_bit)[coalition.mask];
}

}  // namespace qmp::commit
