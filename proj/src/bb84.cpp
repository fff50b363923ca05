#include "qmp/bb84.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmp/quantum.hpp"
#include "qmp/rng.hpp"

namespace qmp::bb84 {

using commit::CommitSession;
using quantum::QuantumState;

double delayed_attack_detection_probability(int test_size) {
    return 1.0 - std::pow(0.75, test_size);
}

namespace {

void validate(int b0, int b1, int choice, const Params& p) {
    if (b0 < 0 || b0 > 1 || b1 < 0 || b1 > 1 || choice < 0 || choice > 1)
        throw std::invalid_argument("payload and choice must be bits");
    if (p.num_positions < 32) throw std::invalid_argument("at least 32 positions required");
    if (!(p.test_fraction > 0 && p.test_fraction < 1))
        throw std::invalid_argument("test fraction must be in (0,1)");
    if (!structures::partially_robust_admissible(p.ambient))
        throw commit::InadmissibleStructure("two tolerated coalitions cover the player set");
    if (p.committer == p.commit_receiver)
        throw std::invalid_argument("committer and commit receiver must differ");
}

BitString pair_bits(int basis, int result) {
    BitString v(2);
    v.set(0, basis);
    v.set(1, result);
    return v;
}

}  // namespace

Bb84Session bb84_ot(int b0, int b1, int choice, const Params& params, ReceiverMode mode,
                    uint64_t seed) {
    validate(b0, b1, choice, params);
    const int n = params.num_positions;
    Rng rng(derive_seed(seed, 0));

    Bb84Session s;
    s.n_positions = n;

    // Transmission: the sender's conjugate-coded qubits, measured on arrival
    // by an honest receiver, stored unread by the delayed attacker.
    std::vector<QuantumState> stored;
    const bool delayed = mode == ReceiverMode::DelayedMeasurement;
    if (delayed) stored.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int x = rng.bit(), basis = rng.bit();
        s.sender_bits.push_back(x);
        s.sender_bases.push_back(basis);
        QuantumState qubit = quantum::prepare_conjugate(x, basis);
        if (delayed) {
            // Commit to fabricated values; keep the qubit coherent.
            s.receiver_bases.push_back(rng.bit());
            s.receiver_results.push_back(rng.bit());
            stored.push_back(std::move(qubit));
        } else {
            const int rb = rng.bit();
            s.receiver_bases.push_back(rb);
            s.receiver_results.push_back(quantum::measure_conjugate(qubit, rb, rng));
        }
    }
    if (params.with_log)
        s.log.msg(0, 0, 1, "qubits", std::to_string(n) + " conjugate-coded positions");

    // Measurement forcing: one commitment per position for (basis, result).
    if (params.forcing) {
        for (int i = 0; i < n; ++i) {
            CommitSession c = commit::commit_partial(
                pair_bits(s.receiver_bases[static_cast<size_t>(i)],
                          s.receiver_results[static_cast<size_t>(i)]),
                params.committer, params.commit_receiver, params.ambient, params.commit_rounds, {},
                derive_seed(seed, 1 + static_cast<uint64_t>(i)));
            if (c.status != commit::Status::Committed)
                throw std::logic_error("honest position commitment failed");
            ++s.commitments;
        }
        if (params.with_log)
            s.log.msg(1, 1, -1, "commitments", std::to_string(s.commitments) + " sessions");
    }

    // Random test subset, opened and checked with zero tolerance.
    const int test_size = static_cast<int>(params.test_fraction * n);
    s.test_set = rng.sample(n, test_size);
    if (params.with_log) {
        std::string ts;
        for (int i : s.test_set) ts += std::to_string(i) + " ";
        s.log.msg(2, 0, -1, "test-set", ts);
    }
    for (int i : s.test_set) {
        int basis, result;
        if (!params.forcing && delayed) {
            // Nothing pins the attacker down: measure this position now, in a
            // fresh basis, and report truthfully.
            basis = rng.bit();
            result = quantum::measure_conjugate(stored[static_cast<size_t>(i)], basis, rng);
            s.receiver_bases[static_cast<size_t>(i)] = basis;
            s.receiver_results[static_cast<size_t>(i)] = result;
        } else {
            basis = s.receiver_bases[static_cast<size_t>(i)];
            result = s.receiver_results[static_cast<size_t>(i)];
        }
        if (basis == s.sender_bases[static_cast<size_t>(i)] &&
            result != s.sender_bits[static_cast<size_t>(i)]) {
            s.verdict = Bb84Session::Verdict::AbortCheatDetected;
            s.first_bad_position = i;
            if (params.with_log) s.log.verdict("abort-cheat-detected " + std::to_string(i));
            return s;
        }
    }

    // Basis announcement for the surviving positions.
    if (params.with_log) s.log.msg(3, 0, -1, "bases", "announced");
    std::vector<int> attacker_bits_by_pos;
    if (delayed) {
        // The attacker measures every stored qubit in the announced basis;
        // on a noiseless channel this recovers the sender's bit exactly.
        attacker_bits_by_pos.assign(static_cast<size_t>(n), -1);
        for (int i = 0; i < n; ++i) {
            if (std::find(s.test_set.begin(), s.test_set.end(), i) != s.test_set.end()) continue;
            attacker_bits_by_pos[static_cast<size_t>(i)] = quantum::measure_conjugate(
                stored[static_cast<size_t>(i)], s.sender_bases[static_cast<size_t>(i)], rng);
        }
        s.attacker_learned_both = true;
    }

    std::vector<int> good, bad;
    for (int i = 0; i < n; ++i) {
        if (std::find(s.test_set.begin(), s.test_set.end(), i) != s.test_set.end()) continue;
        if (s.receiver_bases[static_cast<size_t>(i)] == s.sender_bases[static_cast<size_t>(i)])
            good.push_back(i);
        else
            bad.push_back(i);
    }
    const int usable = static_cast<int>(std::min(good.size(), bad.size()));
    if (usable < params.min_good) {
        s.verdict = Bb84Session::Verdict::AbortTooFewGood;
        if (params.with_log) s.log.verdict("abort-too-few-good");
        return s;
    }
    good.resize(static_cast<size_t>(usable));
    bad.resize(static_cast<size_t>(usable));
    s.index_sets[choice] = good;
    s.index_sets[1 - choice] = bad;
    if (params.with_log) {
        s.log.msg(4, 1, 0, "index-sets",
                  std::to_string(usable) + "+" + std::to_string(usable) + " positions");
    }

    // Masked payload: the XOR of the sender bits over each index set.
    const int payload[2] = {b0, b1};
    for (int j = 0; j < 2; ++j) {
        int m = 0;
        for (int i : s.index_sets[j]) m ^= s.sender_bits[static_cast<size_t>(i)];
        s.masked[j] = payload[j] ^ m;
    }
    if (params.with_log)
        s.log.msg(5, 0, 1, "masked",
                  std::to_string(s.masked[0]) + " " + std::to_string(s.masked[1]));

    // Receiver output: measured results where the bases agreed, or, for the
    // undetected attacker, the exact sender bits on both sets.
    if (delayed) {
        for (int j = 0; j < 2; ++j) {
            int m = 0;
            for (int i : s.index_sets[j]) m ^= attacker_bits_by_pos[static_cast<size_t>(i)];
            s.attacker_bits[j] = s.masked[j] ^ m;
        }
        s.receiver_output = s.attacker_bits[choice];
    } else {
        int m = 0;
        for (int i : s.index_sets[choice]) m ^= s.receiver_results[static_cast<size_t>(i)];
        s.receiver_output = s.masked[choice] ^ m;
    }
    s.verdict = Bb84Session::Verdict::Accept;
    if (params.with_log) s.log.verdict("accept " + std::to_string(s.receiver_output));
    return s;
}

}  // namespace qmp::bb84
