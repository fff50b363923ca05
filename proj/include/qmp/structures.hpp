#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmp::structures {

inline constexpr int kMaxPlayers = 16;

using PlayerId = int;

// Subset of the ambient n players, bitmask semantics.
struct PlayerSet {
    uint32_t mask = 0;

    static PlayerSet of(std::initializer_list<int> players) {
        PlayerSet s;
        for (int p : players) s.mask |= 1u << p;
        return s;
    }
    static PlayerSet single(int p) { return PlayerSet{1u << p}; }
    static PlayerSet full(int n) { return PlayerSet{n == 32 ? ~0u : (1u << n) - 1u}; }

    bool contains(int p) const { return (mask >> p) & 1u; }
    bool empty() const { return mask == 0; }
    int count() const { return __builtin_popcount(mask); }

    bool subset_of(PlayerSet o) const { return (mask & ~o.mask) == 0; }
    PlayerSet unite(PlayerSet o) const { return PlayerSet{mask | o.mask}; }
    PlayerSet intersect(PlayerSet o) const { return PlayerSet{mask & o.mask}; }
    PlayerSet minus(PlayerSet o) const { return PlayerSet{mask & ~o.mask}; }
    PlayerSet with(int p) const { return PlayerSet{mask | (1u << p)}; }
    PlayerSet without(int p) const { return PlayerSet{mask & ~(1u << p)}; }
    PlayerSet complement(int n) const { return PlayerSet{full(n).mask & ~mask}; }

    std::vector<int> members() const {
        std::vector<int> v;
        for (int p = 0; p < 32; ++p)
            if (contains(p)) v.push_back(p);
        return v;
    }

    auto operator<=>(const PlayerSet&) const = default;

    std::string str() const;  // "{0,2}" form
};

enum class FamilyKind { Downward, Upward };

// Monotone family of player subsets stored by its extremal sets: the maximal
// sets of a subset-closed (Downward) family, the minimal sets of a
// superset-closed (Upward) one. Construction canonicalizes to an antichain.
class MonotoneFamily {
  public:
    MonotoneFamily() : n_(0), kind_(FamilyKind::Downward), extremal_{PlayerSet{}} {}
    MonotoneFamily(int n, FamilyKind kind, std::vector<PlayerSet> sets);

    // Adversary structure of all coalitions with at most t players.
    static MonotoneFamily threshold(int n, int t);

    int n() const { return n_; }
    FamilyKind kind() const { return kind_; }
    const std::vector<PlayerSet>& extremal() const { return extremal_; }

    bool contains(PlayerSet s) const;
    bool subfamily_of(const MonotoneFamily& o) const;  // every member of *this in o
    bool operator==(const MonotoneFamily& o) const {
        return n_ == o.n_ && kind_ == o.kind_ && extremal_ == o.extremal_;
    }

    // member[mask] bitmap over all 2^n subsets.
    std::vector<bool> membership_bitmap() const;

  private:
    int n_;
    FamilyKind kind_;
    std::vector<PlayerSet> extremal_;
};

// Witness pair of adversary sets whose union covers `target`, if one exists.
// Checking extremal sets suffices by monotonicity; the pair may repeat a set.
std::optional<std::pair<PlayerSet, PlayerSet>> two_sets_cover(const MonotoneFamily& a,
                                                              PlayerSet target);

// No two tolerated coalitions cover the full player set.
bool partially_robust_admissible(const MonotoneFamily& a);

// No two tolerated coalitions cover all players but one, for every choice of
// the excluded player.
bool robust_admissible(const MonotoneFamily& a);

// Access structure of complements: Z qualified iff its complement is a
// tolerated coalition.
MonotoneFamily dual_access(const MonotoneFamily& a);

// Maximal sets unable to reconstruct; one replica per such set in `sharing`.
// Empty when the access structure qualifies the empty set.
std::vector<PlayerSet> max_unqualified(const MonotoneFamily& z);

// Coalitions tolerable (for secrecy) once the protocol has terminated:
// downward closure of the complements of all non-tolerated sets, plus the
// complement of one chosen maximal coalition m.
MonotoneFamily post_termination_secure(const MonotoneFamily& a, PlayerSet m);

// True iff `post` fits inside post_termination_secure(a, M) for some maximal
// M; structures containing complements of two unrelated tolerated sets fail.
bool is_admissible_post_structure(const MonotoneFamily& a, const MonotoneFamily& post);

// Coalitions against which disruption is still tolerable after termination:
// all strict subsets of members of `post`.
MonotoneFamily post_termination_robust(const MonotoneFamily& post);

// Orients a pair for commitment so that the chosen coalition m cannot both
// hold the mask and reconstruct: if exactly one endpoint lies outside m, that
// endpoint commits (sends); otherwise the given order stands.
std::pair<PlayerId, PlayerId> choose_direction(std::pair<PlayerId, PlayerId> pair, PlayerSet m);

// Literal syntax: "threshold(n,t)" or "sets(n; 0 1, 2 3)".
MonotoneFamily parse_structure(std::string_view text);
std::string format_structure(const MonotoneFamily& f);

}  // namespace qmp::structures
