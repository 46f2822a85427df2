#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "robomut/ast.hpp"
#include "robomut/parse.hpp"
#include "robomut/scenario.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(ROBOMUT_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline robomut::Program load_program(const std::string& name) {
    return robomut::parse_program(slurp(data_path(name)));
}

inline robomut::ScenarioSpec load_scenario(const std::string& name = "reference_scenario.json") {
    return robomut::scenario_from_json(nlohmann::json::parse(slurp(data_path(name))));
}

/// Reference scenario with the randomize block stripped, for tests that
/// need exact positions.
inline robomut::ScenarioSpec fixed_scenario() {
    auto s = load_scenario();
    s.randomize.clear();
    return s;
}

// --- random program generation (hand-rolled property-test input) -----------

struct ProgramGen {
    std::mt19937_64 engine;

    explicit ProgramGen(std::uint64_t seed) : engine(seed) {}

    double number() {
        // mixes easy decimals with awkward ones so the canonical form is
        // exercised on shortest-round-trip output
        switch (engine() % 4) {
            case 0: return static_cast<double>(static_cast<int>(engine() % 400)) / 4.0;
            case 1: return std::uniform_real_distribution<double>(-1000.0, 1000.0)(engine);
            case 2: return static_cast<double>(engine() % 100);
            default: return std::uniform_real_distribution<double>(-1.0, 1.0)(engine);
        }
    }

    std::string channel() {
        static const char* channels[] = {"color",        "robot.x",  "robot.y",
                                         "robot.z",      "robot.angle", "box.0.x",
                                         "box.0.y",      "box.0.z",  "distance.0.x",
                                         "distance.0.z", "box.3.y"};
        return channels[engine() % (sizeof(channels) / sizeof(channels[0]))];
    }

    std::string numeric_channel() {
        std::string c = channel();
        while (c == "color") c = channel();
        return c;
    }

    robomut::Arg numeric_arg() {
        if (engine() % 3 == 0) {
            robomut::Probe probe;
            probe.channel = numeric_channel();
            if (engine() % 2) probe.offset = number();
            probe.negated = engine() % 3 == 0;
            return probe;
        }
        return number();
    }

    robomut::Command command() {
        static const char* axes[] = {"x", "y", "z"};
        robomut::Command cmd;
        switch (engine() % 10) {
            case 0: cmd.verb = "pick"; break;
            case 1: cmd.verb = "release"; break;
            case 2:
            case 3:
                cmd.verb = engine() % 2 ? "move" : "moveto";
                cmd.args.emplace_back(std::string(axes[engine() % 3]));
                cmd.args.push_back(numeric_arg());
                break;
            case 4: cmd.verb = "lift"; cmd.args.push_back(numeric_arg()); break;
            case 5: cmd.verb = "drop"; cmd.args.push_back(numeric_arg()); break;
            case 6:
                // quarter-degree absolute angles: mirroring about 360 stays
                // exact in binary floating point
                cmd.verb = "turn";
                cmd.args.emplace_back(static_cast<double>(engine() % 1440) / 4.0);
                break;
            case 7:
                cmd.verb = engine() % 2 ? "turnleft" : "turnright";
                cmd.args.push_back(numeric_arg());
                break;
            case 8: cmd.verb = "wait"; cmd.args.emplace_back(std::abs(number())); break;
            default:
                // grammar-valid but vocabulary-unknown command
                cmd.verb = engine() % 2 ? "pic" : "grip";
                if (engine() % 2) cmd.args.emplace_back(number());
                break;
        }
        return cmd;
    }

    std::vector<robomut::Statement> statements(int depth, int max_len) {
        std::vector<robomut::Statement> out;
        const int n = 1 + static_cast<int>(engine() % static_cast<std::uint64_t>(max_len));
        for (int i = 0; i < n; ++i) {
            const auto roll = engine() % 8;
            if (depth > 0 && roll == 0) {
                robomut::If iff;
                iff.channel = channel();
                if (iff.channel == "color") {
                    iff.cmp = engine() % 2 ? robomut::Comparator::Eq : robomut::Comparator::Ne;
                    iff.literal = std::string(engine() % 2 ? "red" : "blue");
                } else {
                    iff.cmp = static_cast<robomut::Comparator>(engine() % 4);
                    iff.literal = number();
                }
                iff.then_branch = statements(depth - 1, 3);
                if (engine() % 2) iff.else_branch = statements(depth - 1, 3);
                out.push_back(robomut::Statement{std::move(iff)});
            } else if (depth > 0 && roll == 1) {
                robomut::Repeat rep;
                rep.count = 1 + static_cast<long long>(engine() % 3);
                rep.body = statements(depth - 1, 3);
                out.push_back(robomut::Statement{std::move(rep)});
            } else {
                out.push_back(robomut::Statement{command()});
            }
        }
        return out;
    }

    robomut::Program program(int depth = 2, int max_len = 6) {
        robomut::Program p;
        p.statements = statements(depth, max_len);
        return p;
    }
};

// --- single-edit distance (first-order mutant check) ------------------------

int list_edits(const std::vector<robomut::Statement>& a,
               const std::vector<robomut::Statement>& b);

/// Edit count between two statements: 0 identical, 1 single-site change,
/// 2 anything larger.
inline int statement_edits(const robomut::Statement& a, const robomut::Statement& b) {
    if (a == b) return 0;
    const auto* ca = a.as_command();
    const auto* cb = b.as_command();
    if (ca && cb) return 1;  // any command change is one (command) site
    const auto* ia = a.as_if();
    const auto* ib = b.as_if();
    if (ia && ib) {
        if (ia->channel == ib->channel && ia->literal == ib->literal) {
            const bool branches_equal = ia->then_branch == ib->then_branch &&
                                        ia->else_branch == ib->else_branch;
            if (ia->cmp != ib->cmp) return branches_equal ? 1 : 2;
            const int inner = list_edits(ia->then_branch, ib->then_branch) +
                              list_edits(ia->else_branch, ib->else_branch);
            return inner == 0 ? 2 : inner;  // something differed; find it below
        }
        return 2;
    }
    const auto* ra = a.as_repeat();
    const auto* rb = b.as_repeat();
    if (ra && rb && ra->count == rb->count) return list_edits(ra->body, rb->body);
    return 2;
}

inline int list_edits(const std::vector<robomut::Statement>& a,
                      const std::vector<robomut::Statement>& b) {
    if (a == b) return 0;
    const auto na = a.size(), nb = b.size();
    if (na == nb) {
        int edits = 0;
        for (std::size_t i = 0; i < na && edits < 2; ++i)
            if (!(a[i] == b[i])) edits += statement_edits(a[i], b[i]);
        return edits;
    }
    // one statement deleted or inserted
    const auto& longer = na > nb ? a : b;
    const auto& shorter = na > nb ? b : a;
    if (longer.size() != shorter.size() + 1) return 2;
    std::size_t k = 0;
    while (k < shorter.size() && longer[k] == shorter[k]) ++k;
    for (std::size_t i = k; i < shorter.size(); ++i)
        if (!(longer[i + 1] == shorter[i])) return 2;
    return 1;
}

/// True when `mutant` is `original` with exactly one site edited.
inline bool first_order(const robomut::Program& original, const robomut::Program& mutant) {
    return list_edits(original.statements, mutant.statements) == 1;
}

}  // namespace testutil
