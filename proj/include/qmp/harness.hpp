#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmp/bb84.hpp"
#include "qmp/circuit.hpp"
#include "qmp/commit.hpp"
#include "qmp/quantum.hpp"

namespace qmp::harness {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int l, const std::string& what)
        : std::runtime_error("line " + std::to_string(l) + ": " + what), line(l) {}
};

enum class ProtocolKind { CommitPartial, CommitRobust, Bb84Ot, Gmw, AttackDemo, StructureCheck };
std::string protocol_name(ProtocolKind p);

struct PhaseEvent {
    commit::Phase phase = commit::Phase::AfterCommit;
    structures::PlayerSet coalition;
};

// Declarative experiment: structure, protocol, strategies, phase events,
// trial count and seed. Loaded from line-oriented key/value text.
struct Scenario {
    std::string name = "unnamed";
    structures::MonotoneFamily adversary;
    ProtocolKind protocol = ProtocolKind::StructureCheck;
    commit::StrategyProfile strategies;
    std::vector<PhaseEvent> events;
    long trials = 1;
    uint64_t seed = 1;

    // commitment parameters
    int sender = 0, receiver = 1;
    int k = 2;
    int payload_len = 1;
    std::optional<BitString> payload;  // random per trial when absent

    // conjugate-coding parameters
    bb84::Params bb84_params;
    int ot_b0 = 0, ot_b1 = 1, ot_choice = 0;
    bb84::ReceiverMode receiver_mode = bb84::ReceiverMode::Honest;

    // circuit evaluation parameters
    std::string circuit_path;
    mpc::BooleanCircuit circuit;
    std::vector<int> circuit_inputs;
    bool bb84_backend = false;

    // attack demo
    quantum::ToyProtocol toy = quantum::ToyProtocol::Entangling;

    std::optional<std::string> expect;  // per-trial verdict expectation
    std::optional<bool> expect_partial, expect_robust;
    bool log_full = false;
};

Scenario load_scenario(const std::string& text);

struct Transcript {
    std::vector<std::string> lines;
    std::map<std::string, long> verdict_counts;
    bool pass = true;

    std::string to_text() const;
    std::string to_json_text() const;
};

enum class ReportFormat { Text, Structured };

// Executes the trials with per-trial derived seeds; equal (scenario, seed)
// inputs give byte-identical transcripts. Worker threads split the trials and
// merge by index, so the thread count never changes the output.
Transcript run_scenario(const Scenario& s, int threads = 1);

std::string report(const Transcript& t, ReportFormat format);

}  // namespace qmp::harness
