#include "qmp/mpc.hpp"

namespace qmp::mpc {

int Bb84OtBackend::raw_ot(int b0, int b1, int choice) {
    const uint64_t session_seed = derive_seed(seed_, static_cast<uint64_t>(sessions++));
    auto s = bb84::bb84_ot(b0, b1, choice, params_, bb84::ReceiverMode::Honest, session_seed);
    if (s.verdict != bb84::Bb84Session::Verdict::Accept)
        throw OtAborted("conjugate-coding session aborted");
    return s.receiver_output;
}

int Bb84OtBackend::ot2(int sender, int receiver, int b0, int b1, int choice) {
    ++invocations;
    // The pair commits in one fixed direction; the committer is the OT
    // receiver, so the natural payload direction is the opposite one.
    auto [commit_sender, commit_receiver] = structures::choose_direction({sender, receiver}, anchor_);
    const int natural_sender = commit_receiver;
    if (natural_sender == sender) return raw_ot(b0, b1, choice);
    Rng aux(derive_seed(seed_, 0x5eed0000 + static_cast<uint64_t>(invocations)));
    struct Raw : OtBackend {
        Bb84OtBackend* outer;
        int ot2(int, int, int x0, int x1, int c) override { return outer->raw_ot(x0, x1, c); }
    } raw;
    raw.outer = this;
    return ot_reverse(raw, receiver, sender, b0, b1, choice, aux);
}

int ot4_from_ot2(OtBackend& ot, int sender, int receiver, const std::array<int, 4>& msgs, int c1,
                 int c2, BitSource& rnd, GmwViews* views) {
    const int s0 = rnd.bit(), s1 = rnd.bit();
    const int pad = ot.ot2(sender, receiver, s0, s1, c1);
    const int row0 = ot.ot2(sender, receiver, msgs[0] ^ s0, msgs[1] ^ s0, c2);
    const int row1 = ot.ot2(sender, receiver, msgs[2] ^ s1, msgs[3] ^ s1, c2);
    if (views) {
        views->add(receiver, "ot4.pad", pad);
        views->add(receiver, "ot4.row0", row0);
        views->add(receiver, "ot4.row1", row1);
    }
    return pad ^ (c1 ? row1 : row0);
}

int ot_reverse(OtBackend& ot, int prim_sender, int prim_receiver, int a0, int a1, int d,
               BitSource& rnd, GmwViews* views) {
    const int r = rnd.bit();  // drawn by the derived receiver
    const int w = ot.ot2(prim_sender, prim_receiver, r, r ^ d, a0 ^ a1);
    const int z = w ^ a0;  // sent back to the derived receiver
    if (views) {
        views->add(prim_receiver, "rev.w", w);
        views->add(prim_sender, "rev.z", z);
    }
    return z ^ r;  // a0 ^ (a0^a1)d = a_d
}

std::vector<int> gmw_eval(const BooleanCircuit& c, const std::vector<int>& inputs, OtBackend& ot,
                          uint64_t seed) {
    Rng rng(seed);
    return gmw_eval_with(c, inputs, ot, rng);
}

std::vector<int> gmw_eval_with(const BooleanCircuit& c, const std::vector<int>& inputs,
                               OtBackend& ot, BitSource& rnd, GmwViews* views) {
    c.validate();
    if (inputs.size() != c.inputs.size()) throw CircuitInvalid("input count mismatch");
    const int n = c.num_players;
    // shares[w][p]: player p's XOR share of wire w
    std::vector<std::vector<int>> shares(static_cast<size_t>(c.num_wires),
                                         std::vector<int>(static_cast<size_t>(n), 0));

    for (size_t i = 0; i < inputs.size(); ++i) {
        const auto [owner, w] = c.inputs[i];
        int acc = inputs[i] & 1;
        for (int p = 0; p < n; ++p) {
            if (p == owner) continue;
            const int sh = rnd.bit();
            shares[static_cast<size_t>(w)][static_cast<size_t>(p)] = sh;
            if (views) views->add(p, "in" + std::to_string(w), sh);
            acc ^= sh;
        }
        shares[static_cast<size_t>(w)][static_cast<size_t>(owner)] = acc;
    }

    for (const Gate& g : c.gates) {
        auto& out = shares[static_cast<size_t>(g.out)];
        const auto& x = shares[static_cast<size_t>(g.a)];
        switch (g.kind) {
            case Gate::Kind::Xor: {
                const auto& y = shares[static_cast<size_t>(g.b)];
                for (int p = 0; p < n; ++p)
                    out[static_cast<size_t>(p)] = x[static_cast<size_t>(p)] ^ y[static_cast<size_t>(p)];
                break;
            }
            case Gate::Kind::Not:
                for (int p = 0; p < n; ++p)
                    out[static_cast<size_t>(p)] = p == 0 ? x[static_cast<size_t>(p)] ^ 1
                                                         : x[static_cast<size_t>(p)];
                break;
            case Gate::Kind::And: {
                const auto& y = shares[static_cast<size_t>(g.b)];
                for (int p = 0; p < n; ++p)
                    out[static_cast<size_t>(p)] =
                        x[static_cast<size_t>(p)] & y[static_cast<size_t>(p)];
                // cross terms x_i y_j ^ x_j y_i, one 1-of-4 transfer per pair
                for (int i = 0; i < n; ++i) {
                    for (int j = i + 1; j < n; ++j) {
                        const int xi = x[static_cast<size_t>(i)], yi = y[static_cast<size_t>(i)];
                        const int s = rnd.bit();
                        std::array<int, 4> msgs;
                        for (int c1 = 0; c1 <= 1; ++c1)
                            for (int c2 = 0; c2 <= 1; ++c2)
                                msgs[static_cast<size_t>(c1 * 2 + c2)] = s ^ (xi & c2) ^ (yi & c1);
                        const int t = ot4_from_ot2(ot, i, j, msgs, x[static_cast<size_t>(j)],
                                                   y[static_cast<size_t>(j)], rnd, views);
                        out[static_cast<size_t>(i)] ^= s;
                        out[static_cast<size_t>(j)] ^= t;
                    }
                }
                break;
            }
        }
    }

    std::vector<int> result;
    for (int w : c.outputs) {
        int v = 0;
        for (int p = 0; p < n; ++p) {
            v ^= shares[static_cast<size_t>(w)][static_cast<size_t>(p)];
            if (views)
                for (int q = 0; q < n; ++q)
                    if (q != p)
                        views->add(q, "out" + std::to_string(w) + "." + std::to_string(p),
                                   shares[static_cast<size_t>(w)][static_cast<size_t>(p)]);
        }
        result.push_back(v);
    }
    return result;
}

}  // namespace qmp::mpc
