#pragma once

#include <vector>

#include "qmp/commit.hpp"
#include "qmp/eventlog.hpp"
#include "qmp/structures.hpp"

namespace qmp::bb84 {

// Conjugate-coding oblivious transfer: the payload sender transmits qubits,
// the receiver measures and commits to bases and results, a random subset is
// opened, and the surviving positions carry the masked payload bits.
struct Params {
    int num_positions = 128;     // N, at least 32
    double test_fraction = 0.5;  // share of positions opened for testing
    int min_good = 16;           // smallest usable index set after truncation
    int commit_rounds = 1;       // challenge rounds per position commitment
    bool forcing = true;         // commitments enabled
    // Ambient player set for the commitment backend; the OT receiver commits
    // to the OT sender inside this structure.
    structures::MonotoneFamily ambient = structures::MonotoneFamily::threshold(3, 1);
    structures::PlayerId committer = 0;
    structures::PlayerId commit_receiver = 1;
    bool with_log = true;
};

enum class ReceiverMode { Honest, DelayedMeasurement };

struct Bb84Session {
    int n_positions = 0;
    std::vector<int> sender_bits, sender_bases;        // x_i, theta_i
    std::vector<int> receiver_bases, receiver_results; // committed theta'_i, y_i
    std::vector<int> test_set;                         // opened positions
    std::vector<int> index_sets[2];                    // I_0, I_1 as announced
    int masked[2] = {-1, -1};                          // b_j ^ m_j
    enum class Verdict { Accept, AbortCheatDetected, AbortTooFewGood } verdict = Verdict::Accept;
    int first_bad_position = -1;
    int receiver_output = -1;  // b_c on accept
    // Delayed attacker bookkeeping: set when the attack went undetected and
    // the stored qubits were measured in the announced bases.
    bool attacker_learned_both = false;
    int attacker_bits[2] = {-1, -1};
    int commitments = 0;
    EventLog log;
};

Bb84Session bb84_ot(int b0, int b1, int choice, const Params& params, ReceiverMode mode,
                    uint64_t seed);

// Detection probability of the delayed-measurement attack for a given test
// set size: per tested position the bases agree with probability 1/2 and the
// guessed result is then wrong with probability 1/2.
double delayed_attack_detection_probability(int test_size);

}  // namespace qmp::bb84
