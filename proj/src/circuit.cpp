#include "qmp/circuit.hpp"

#include <sstream>

namespace qmp::mpc {

void BooleanCircuit::validate() const {
    if (num_players < 1) throw CircuitInvalid("circuit needs at least one player");
    std::vector<bool> defined(static_cast<size_t>(num_wires), false);
    for (auto [player, wire] : inputs) {
        if (player < 0 || player >= num_players) throw CircuitInvalid("input player out of range");
        if (wire < 0 || wire >= num_wires) throw CircuitInvalid("input wire out of range");
        if (defined[static_cast<size_t>(wire)]) throw CircuitInvalid("wire defined twice");
        defined[static_cast<size_t>(wire)] = true;
    }
    for (const Gate& g : gates) {
        auto used = [&](int w) {
            if (w < 0 || w >= num_wires || !defined[static_cast<size_t>(w)])
                throw CircuitInvalid("wire used before definition");
        };
        used(g.a);
        if (g.kind != Gate::Kind::Not) used(g.b);
        if (g.out < 0 || g.out >= num_wires || defined[static_cast<size_t>(g.out)])
            throw CircuitInvalid("gate output redefines a wire");
        defined[static_cast<size_t>(g.out)] = true;
    }
    if (outputs.empty()) throw CircuitInvalid("circuit declares no outputs");
    for (int w : outputs)
        if (w < 0 || w >= num_wires || !defined[static_cast<size_t>(w)])
            throw CircuitInvalid("output wire undefined");
}

BooleanCircuit parse_circuit(std::string_view text) {
    BooleanCircuit c;
    std::istringstream in{std::string(text)};
    std::string line;
    int max_wire = -1;
    auto wire = [&](const std::string& tok) {
        const int w = std::stoi(tok);
        if (w < 0) throw CircuitInvalid("negative wire id");
        max_wire = std::max(max_wire, w);
        return w;
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "in") {
            std::string p, w;
            if (!(ls >> p >> w)) throw CircuitInvalid("in line needs player and wire");
            const int player = std::stoi(p);
            c.num_players = std::max(c.num_players, player + 1);
            c.inputs.emplace_back(player, wire(w));
        } else if (word == "gate") {
            std::string kind, out, a, b;
            if (!(ls >> kind >> out >> a)) throw CircuitInvalid("gate line too short");
            Gate g;
            if (kind == "XOR")
                g.kind = Gate::Kind::Xor;
            else if (kind == "AND")
                g.kind = Gate::Kind::And;
            else if (kind == "NOT")
                g.kind = Gate::Kind::Not;
            else
                throw CircuitInvalid("unknown gate kind: " + kind);
            g.out = wire(out);
            g.a = wire(a);
            if (g.kind != Gate::Kind::Not) {
                if (!(ls >> b)) throw CircuitInvalid("binary gate needs two inputs");
                g.b = wire(b);
            }
            c.gates.push_back(g);
        } else if (word == "out") {
            std::string w;
            if (!(ls >> w)) throw CircuitInvalid("out line needs a wire");
            c.outputs.push_back(wire(w));
        } else {
            throw CircuitInvalid("unknown directive: " + word);
        }
    }
    c.num_wires = max_wire + 1;
    c.validate();
    return c;
}

std::vector<int> eval_plain(const BooleanCircuit& c, const std::vector<int>& inputs) {
    c.validate();
    if (inputs.size() != c.inputs.size()) throw CircuitInvalid("input count mismatch");
    std::vector<int> w(static_cast<size_t>(c.num_wires), 0);
    for (size_t i = 0; i < inputs.size(); ++i)
        w[static_cast<size_t>(c.inputs[i].second)] = inputs[i] & 1;
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::Xor:
                w[static_cast<size_t>(g.out)] = w[static_cast<size_t>(g.a)] ^ w[static_cast<size_t>(g.b)];
                break;
            case Gate::Kind::And:
                w[static_cast<size_t>(g.out)] = w[static_cast<size_t>(g.a)] & w[static_cast<size_t>(g.b)];
                break;
            case Gate::Kind::Not:
                w[static_cast<size_t>(g.out)] = w[static_cast<size_t>(g.a)] ^ 1;
                break;
        }
    }
    std::vector<int> out;
    for (int ow : c.outputs) out.push_back(w[static_cast<size_t>(ow)]);
    return out;
}

}  // namespace qmp::mpc
