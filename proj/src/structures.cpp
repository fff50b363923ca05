#include "qmp/structures.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace qmp::structures {

std::string PlayerSet::str() const {
    std::string s = "{";
    bool first = true;
    for (int p : members()) {
        if (!first) s += ",";
        s += std::to_string(p);
        first = false;
    }
    return s + "}";
}

namespace {

// Antichain of the dominating sets: for Downward keep maximal, for Upward
// keep minimal. Duplicates collapse.
std::vector<PlayerSet> canonicalize(FamilyKind kind, std::vector<PlayerSet> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<PlayerSet> keep;
    for (size_t i = 0; i < sets.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < sets.size() && !dominated; ++j) {
            if (i == j) continue;
            if (kind == FamilyKind::Downward)
                dominated = sets[i].subset_of(sets[j]) && sets[i] != sets[j];
            else
                dominated = sets[j].subset_of(sets[i]) && sets[i] != sets[j];
        }
        if (!dominated) keep.push_back(sets[i]);
    }
    return keep;
}

}  // namespace

MonotoneFamily::MonotoneFamily(int n, FamilyKind kind, std::vector<PlayerSet> sets)
    : n_(n), kind_(kind) {
    if (n < 0 || n > kMaxPlayers) throw std::invalid_argument("player count must be in [0,16]");
    for (PlayerSet s : sets)
        if (!s.subset_of(PlayerSet::full(n)))
            throw std::invalid_argument("set exceeds the player range");
    // The empty coalition is always tolerated; an empty Downward family
    // collapses to {∅}.
    if (kind == FamilyKind::Downward && sets.empty()) sets.push_back(PlayerSet{});
    extremal_ = canonicalize(kind, std::move(sets));
}

MonotoneFamily MonotoneFamily::threshold(int n, int t) {
    if (n < 0 || n > kMaxPlayers) throw std::invalid_argument("player count must be in [0,16]");
    if (t < 0 || t > n) throw std::invalid_argument("threshold must be in [0,n]");
    std::vector<PlayerSet> sets;
    for (uint32_t m = 0; m < (1u << n); ++m)
        if (__builtin_popcount(m) == t) sets.push_back(PlayerSet{m});
    return MonotoneFamily(n, FamilyKind::Downward, std::move(sets));
}

bool MonotoneFamily::contains(PlayerSet s) const {
    for (PlayerSet e : extremal_) {
        if (kind_ == FamilyKind::Downward && s.subset_of(e)) return true;
        if (kind_ == FamilyKind::Upward && e.subset_of(s)) return true;
    }
    return false;
}

bool MonotoneFamily::subfamily_of(const MonotoneFamily& o) const {
    if (n_ != o.n_) return false;
    for (PlayerSet e : extremal_)
        if (!o.contains(e)) return false;
    return true;
}

std::vector<bool> MonotoneFamily::membership_bitmap() const {
    const uint32_t total = 1u << n_;
    std::vector<bool> member(total, false);
    for (PlayerSet e : extremal_) member[e.mask] = true;
    // Propagate the closure one removed/added element at a time.
    if (kind_ == FamilyKind::Downward) {
        for (uint32_t m = total; m-- > 0;) {
            if (!member[m]) continue;
            for (int p = 0; p < n_; ++p)
                if (m & (1u << p)) member[m & ~(1u << p)] = true;
        }
    } else {
        for (uint32_t m = 0; m < total; ++m) {
            if (!member[m]) continue;
            for (int p = 0; p < n_; ++p)
                if (!(m & (1u << p))) member[m | (1u << p)] = true;
        }
    }
    return member;
}

std::optional<std::pair<PlayerSet, PlayerSet>> two_sets_cover(const MonotoneFamily& a,
                                                              PlayerSet target) {
    if (a.kind() != FamilyKind::Downward)
        throw std::invalid_argument("cover check expects an adversary structure");
    const auto& ext = a.extremal();
    for (size_t i = 0; i < ext.size(); ++i)
        for (size_t j = i; j < ext.size(); ++j)
            if (target.subset_of(ext[i].unite(ext[j]))) return std::make_pair(ext[i], ext[j]);
    return std::nullopt;
}

bool partially_robust_admissible(const MonotoneFamily& a) {
    return !two_sets_cover(a, PlayerSet::full(a.n())).has_value();
}

bool robust_admissible(const MonotoneFamily& a) {
    for (int p = 0; p < a.n(); ++p)
        if (two_sets_cover(a, PlayerSet::full(a.n()).without(p)).has_value()) return false;
    return true;
}

MonotoneFamily dual_access(const MonotoneFamily& a) {
    if (a.kind() != FamilyKind::Downward)
        throw std::invalid_argument("dual expects an adversary structure");
    std::vector<PlayerSet> minimal;
    for (PlayerSet e : a.extremal()) minimal.push_back(e.complement(a.n()));
    return MonotoneFamily(a.n(), FamilyKind::Upward, std::move(minimal));
}

std::vector<PlayerSet> max_unqualified(const MonotoneFamily& z) {
    if (z.kind() != FamilyKind::Upward)
        throw std::invalid_argument("max_unqualified expects an access structure");
    if (z.contains(PlayerSet{})) return {};  // everything qualified, no replicas
    const auto member = z.membership_bitmap();
    std::vector<PlayerSet> out;
    for (uint32_t m = 0; m < (1u << z.n()); ++m) {
        if (member[m]) continue;
        bool maximal = true;
        for (int p = 0; p < z.n() && maximal; ++p)
            if (!(m & (1u << p)) && !member[m | (1u << p)]) maximal = false;
        if (maximal) out.push_back(PlayerSet{m});
    }
    return out;
}

namespace {

// Minimal sets outside a Downward family: S not a member while every S\{p} is.
std::vector<PlayerSet> minimal_nonmembers(const MonotoneFamily& a) {
    const auto member = a.membership_bitmap();
    std::vector<PlayerSet> out;
    for (uint32_t m = 0; m < (1u << a.n()); ++m) {
        if (member[m]) continue;
        bool minimal = true;
        for (int p = 0; p < a.n() && minimal; ++p)
            if ((m & (1u << p)) && !member[m & ~(1u << p)]) minimal = false;
        if (minimal) out.push_back(PlayerSet{m});
    }
    return out;
}

}  // namespace

MonotoneFamily post_termination_secure(const MonotoneFamily& a, PlayerSet m) {
    if (a.kind() != FamilyKind::Downward)
        throw std::invalid_argument("post structure expects an adversary structure");
    const auto& ext = a.extremal();
    if (std::find(ext.begin(), ext.end(), m) == ext.end())
        throw std::invalid_argument("chosen set is not maximal in the structure");
    std::vector<PlayerSet> sets;
    for (PlayerSet s : minimal_nonmembers(a)) sets.push_back(s.complement(a.n()));
    sets.push_back(m.complement(a.n()));
    return MonotoneFamily(a.n(), FamilyKind::Downward, std::move(sets));
}

bool is_admissible_post_structure(const MonotoneFamily& a, const MonotoneFamily& post) {
    if (post.kind() != FamilyKind::Downward)
        throw std::invalid_argument("post structure expects an adversary structure");
    for (PlayerSet m : a.extremal())
        if (post.subfamily_of(post_termination_secure(a, m))) return true;
    return false;
}

MonotoneFamily post_termination_robust(const MonotoneFamily& post) {
    if (post.kind() != FamilyKind::Downward)
        throw std::invalid_argument("post structure expects an adversary structure");
    std::vector<PlayerSet> sets;
    for (PlayerSet e : post.extremal())
        for (int p : e.members()) sets.push_back(e.without(p));
    return MonotoneFamily(post.n(), FamilyKind::Downward, std::move(sets));
}

std::pair<PlayerId, PlayerId> choose_direction(std::pair<PlayerId, PlayerId> pair, PlayerSet m) {
    const bool first_out = !m.contains(pair.first);
    const bool second_out = !m.contains(pair.second);
    if (first_out != second_out && second_out) return {pair.second, pair.first};
    return pair;
}

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw std::invalid_argument(std::string("expected '") + c + "' in structure literal");
    }
    bool word(std::string_view w) {
        skip_ws();
        if (text.substr(pos, w.size()) == w) {
            pos += w.size();
            return true;
        }
        return false;
    }
    int number() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw std::invalid_argument("expected a number in structure literal");
        int v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            v = v * 10 + (text[pos++] - '0');
        return v;
    }
    bool at_number() {
        skip_ws();
        return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
    }
    void end() {
        skip_ws();
        if (pos != text.size()) throw std::invalid_argument("trailing junk in structure literal");
    }
};

}  // namespace

MonotoneFamily parse_structure(std::string_view text) {
    Cursor c{text};
    if (c.word("threshold")) {
        c.expect('(');
        const int n = c.number();
        c.expect(',');
        const int t = c.number();
        c.expect(')');
        c.end();
        return MonotoneFamily::threshold(n, t);
    }
    if (c.word("sets")) {
        c.expect('(');
        const int n = c.number();
        c.expect(';');
        std::vector<PlayerSet> sets;
        if (!c.eat(')')) {
            do {
                PlayerSet s;
                while (c.at_number()) {
                    const int p = c.number();
                    if (p >= n) throw std::invalid_argument("player id outside range in structure literal");
                    s = s.with(p);
                }
                sets.push_back(s);
            } while (c.eat(','));
            c.expect(')');
        }
        c.end();
        return MonotoneFamily(n, FamilyKind::Downward, std::move(sets));
    }
    throw std::invalid_argument("structure literal must start with 'threshold' or 'sets'");
}

std::string format_structure(const MonotoneFamily& f) {
    std::string out = "sets(" + std::to_string(f.n()) + ";";
    bool first_set = true;
    for (PlayerSet e : f.extremal()) {
        if (!first_set) out += ",";
        first_set = false;
        for (int p : e.members()) out += " " + std::to_string(p);
        if (e.empty()) out += " ";
    }
    return out + ")";
}

}  // namespace qmp::structures
