#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qmp/bits.hpp"

namespace qmp {

// Shared transcript format:
//   msg <round> <from> <to|broadcast> <kind> <payload-hash>
//   verdict <status>
struct EventLog {
    std::vector<std::string> lines;

    void msg(int round, int from, int to, std::string_view kind, std::string_view payload) {
        std::string l = "msg " + std::to_string(round) + " " + std::to_string(from) + " ";
        l += to < 0 ? "broadcast" : std::to_string(to);
        l += " ";
        l += kind;
        l += " " + hash_hex(payload);
        lines.push_back(std::move(l));
    }
    void verdict(std::string_view status) { lines.push_back("verdict " + std::string(status)); }
    void note(std::string s) { lines.push_back(std::move(s)); }
};

}  // namespace qmp
