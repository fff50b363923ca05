#pragma once

#include <array>
#include <map>
#include <string>

#include "qmp/bb84.hpp"
#include "qmp/circuit.hpp"
#include "qmp/rng.hpp"
#include "qmp/structures.hpp"

namespace qmp::mpc {

struct OtAborted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One 1-of-2 bit oblivious transfer between two named players.
struct OtBackend {
    virtual ~OtBackend() = default;
    virtual int ot2(int sender, int receiver, int b0, int b1, int choice) = 0;
    long invocations = 0;
};

struct IdealOt : OtBackend {
    int ot2(int, int, int b0, int b1, int choice) override {
        ++invocations;
        return choice ? b1 : b0;
    }
};

// OT realized by a conjugate-coding session per invocation. The commitment
// direction inside a pair follows choose_direction with the given anchor set;
// a transfer against that direction goes through the reversal construction.
class Bb84OtBackend : public OtBackend {
  public:
    Bb84OtBackend(bb84::Params params, uint64_t master_seed, structures::PlayerSet anchor)
        : params_(std::move(params)), seed_(master_seed), anchor_(anchor) {
        params_.with_log = false;
    }
    int ot2(int sender, int receiver, int b0, int b1, int choice) override;
    long sessions = 0;

  private:
    int raw_ot(int b0, int b1, int choice);
    bb84::Params params_;
    uint64_t seed_;
    structures::PlayerSet anchor_;
};

// Per-player protocol views, for the honest-but-curious checks.
struct GmwViews {
    std::map<int, std::string> received;
    void add(int player, std::string_view label, int value) {
        received[player] += std::string(label) + "=" + std::to_string(value) + ";";
    }
};

// 1-of-4 transfer from three 1-of-2 instances: two random pads, one pad key
// by the first choice bit, padded message rows by the second.
int ot4_from_ot2(OtBackend& ot, int sender, int receiver, const std::array<int, 4>& msgs, int c1,
                 int c2, BitSource& rnd, GmwViews* views = nullptr);

// Reversed transfer: the primitive runs prim_sender -> prim_receiver, the
// derived transfer delivers a_d from prim_receiver (holding a0, a1) to
// prim_sender (holding d).
int ot_reverse(OtBackend& ot, int prim_sender, int prim_receiver, int a0, int a1, int d,
               BitSource& rnd, GmwViews* views = nullptr);

// Semi-honest XOR-share evaluation: XOR/NOT local, AND via pairwise 1-of-4
// transfers, outputs reconstructed by broadcast.
std::vector<int> gmw_eval(const BooleanCircuit& c, const std::vector<int>& inputs, OtBackend& ot,
                          uint64_t seed);
std::vector<int> gmw_eval_with(const BooleanCircuit& c, const std::vector<int>& inputs,
                               OtBackend& ot, BitSource& rnd, GmwViews* views = nullptr);

}  // namespace qmp::mpc
