#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmp::mpc {

struct CircuitInvalid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Gate {
    enum class Kind { Xor, And, Not } kind;
    int out = 0;
    int a = 0;
    int b = 0;  // unused for Not
};

// Boolean circuit over per-player input wires, gates in topological order.
struct BooleanCircuit {
    int num_players = 0;
    int num_wires = 0;
    std::vector<std::pair<int, int>> inputs;  // (player, wire), in declaration order
    std::vector<Gate> gates;
    std::vector<int> outputs;

    void validate() const;  // throws CircuitInvalid
};

// Text format, line oriented:
//   in <player> <wire>
//   gate XOR|AND|NOT <out> <in1> [<in2>]
//   out <wire>
// '#' starts a comment.
BooleanCircuit parse_circuit(std::string_view text);

std::vector<int> eval_plain(const BooleanCircuit& c, const std::vector<int>& inputs);

}  // namespace qmp::mpc
