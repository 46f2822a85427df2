#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace robomut {

// AST of the robot command language. Programs are immutable after parsing
// and safe to share read-only across concurrent runs; mutation always works
// on copies.

enum class Comparator { Eq, Ne, Lt, Gt };

inline const char* comparator_text(Comparator c) {
    switch (c) {
        case Comparator::Eq: return "=";
        case Comparator::Ne: return "!=";
        case Comparator::Lt: return "<";
        default: return ">";
    }
}

/// Sensor channel identifier. The grammar-level channel vocabulary:
/// color | robot.{x,y,z,angle} | box.<id>.{x,y,z} | distance.<id>.{x,y,z}
struct ChannelId {
    enum class Kind { Color, Robot, Box, Distance };
    enum class Axis { X, Y, Z, Angle };

    Kind kind = Kind::Color;
    Axis axis = Axis::X;
    int box_id = 0;  // for Box / Distance

    friend bool operator==(const ChannelId&, const ChannelId&) = default;

    std::string text() const {
        switch (kind) {
            case Kind::Color: return "color";
            case Kind::Robot: return std::string("robot.") + axis_text(axis);
            case Kind::Box: return "box." + std::to_string(box_id) + "." + axis_text(axis);
            default: return "distance." + std::to_string(box_id) + "." + axis_text(axis);
        }
    }

    bool numeric() const { return kind != Kind::Color; }

    static const char* axis_text(Axis a) {
        switch (a) {
            case Axis::X: return "x";
            case Axis::Y: return "y";
            case Axis::Z: return "z";
            default: return "angle";
        }
    }

    /// Parses the syntactic channel vocabulary; nullopt for anything else.
    static std::optional<ChannelId> parse(const std::string& s) {
        if (s == "color") return ChannelId{Kind::Color, Axis::X, 0};
        auto parse_axis = [](const std::string& t, bool allow_angle) -> std::optional<Axis> {
            if (t == "x") return Axis::X;
            if (t == "y") return Axis::Y;
            if (t == "z") return Axis::Z;
            if (allow_angle && t == "angle") return Axis::Angle;
            return std::nullopt;
        };
        if (s.rfind("robot.", 0) == 0) {
            auto a = parse_axis(s.substr(6), true);
            if (!a) return std::nullopt;
            return ChannelId{Kind::Robot, *a, 0};
        }
        for (const char* prefix : {"box.", "distance."}) {
            const std::string p = prefix;
            if (s.rfind(p, 0) != 0) continue;
            const auto rest = s.substr(p.size());
            const auto dot = rest.find('.');
            if (dot == std::string::npos || dot == 0) return std::nullopt;
            const auto id_text = rest.substr(0, dot);
            int id = 0;
            auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
            if (ec != std::errc{} || ptr != id_text.data() + id_text.size() || id < 0)
                return std::nullopt;
            auto a = parse_axis(rest.substr(dot + 1), false);
            if (!a) return std::nullopt;
            return ChannelId{p == "box." ? Kind::Box : Kind::Distance, *a, id};
        }
        return std::nullopt;
    }
};

/// Sensor probe argument: `@channel`, `@channel+0.5`, or the negated form
/// `-@channel` produced by sign-flip mutations on probe-fed commands.
/// Value at execution time: (negated ? -1 : 1) * (read(channel) + offset).
struct Probe {
    std::string channel;
    double offset = 0.0;
    bool negated = false;

    friend bool operator==(const Probe&, const Probe&) = default;
};

/// Command argument: numeric literal, sensor probe, or a bare word (axis
/// names, goto targets, and whatever string-level mutants produce).
using Arg = std::variant<double, Probe, std::string>;

struct Command {
    std::string verb;  // any identifier; vocabulary is enforced by validation
    std::vector<Arg> args;

    friend bool operator==(const Command&, const Command&) = default;
};

using Literal = std::variant<double, std::string>;

struct Statement;

struct If {
    std::string channel;
    Comparator cmp = Comparator::Eq;
    Literal literal;
    std::vector<Statement> then_branch;
    std::vector<Statement> else_branch;

    friend bool operator==(const If&, const If&) = default;
};

struct Repeat {
    long long count = 1;
    std::vector<Statement> body;

    friend bool operator==(const Repeat&, const Repeat&) = default;
};

struct Statement {
    std::variant<Command, If, Repeat> node;

    friend bool operator==(const Statement&, const Statement&) = default;

    const Command* as_command() const { return std::get_if<Command>(&node); }
    const If* as_if() const { return std::get_if<If>(&node); }
    const Repeat* as_repeat() const { return std::get_if<Repeat>(&node); }
};

struct Program {
    std::vector<Statement> statements;

    friend bool operator==(const Program&, const Program&) = default;
};

// --- verb vocabulary ---------------------------------------------------

enum class VerbKind {
    Pick, Release, Move, MoveTo, Lift, Drop, Turn, TurnLeft, TurnRight, Wait, Goto
};

inline std::optional<VerbKind> verb_kind(const std::string& verb) {
    if (verb == "pick") return VerbKind::Pick;
    if (verb == "release") return VerbKind::Release;
    if (verb == "move") return VerbKind::Move;
    if (verb == "moveto") return VerbKind::MoveTo;
    if (verb == "lift") return VerbKind::Lift;
    if (verb == "drop") return VerbKind::Drop;
    if (verb == "turn") return VerbKind::Turn;
    if (verb == "turnleft") return VerbKind::TurnLeft;
    if (verb == "turnright") return VerbKind::TurnRight;
    if (verb == "wait") return VerbKind::Wait;
    if (verb == "goto") return VerbKind::Goto;
    return std::nullopt;
}

inline bool is_translation_verb(VerbKind k) {
    return k == VerbKind::Move || k == VerbKind::MoveTo || k == VerbKind::Lift ||
           k == VerbKind::Drop;
}

inline bool is_rotation_verb(VerbKind k) {
    return k == VerbKind::Turn || k == VerbKind::TurnLeft || k == VerbKind::TurnRight;
}

inline bool is_gripper_verb(VerbKind k) {
    return k == VerbKind::Pick || k == VerbKind::Release;
}

/// Axis a translation command acts on, if statically known.
/// move/moveto carry the axis as their first argument; lift/drop act on z.
inline std::optional<char> translation_axis(const Command& cmd) {
    const auto kind = verb_kind(cmd.verb);
    if (!kind || !is_translation_verb(*kind)) return std::nullopt;
    if (*kind == VerbKind::Lift || *kind == VerbKind::Drop) return 'z';
    if (cmd.args.empty()) return std::nullopt;
    if (const auto* word = std::get_if<std::string>(&cmd.args[0])) {
        if (word->size() == 1 && (*word == "x" || *word == "y" || *word == "z"))
            return (*word)[0];
    }
    return std::nullopt;
}

// --- site addressing ----------------------------------------------------

/// Stable AST address. `path` is the list of child indices from the root;
/// If children use an extra branch index (0 = then, 1 = else), Repeat bodies
/// use branch index 0. Argument sites append the argument index to their
/// command's path.
struct SiteId {
    enum class Kind { Command, Condition, Argument };

    std::vector<int> path;
    Kind kind = Kind::Command;

    friend bool operator==(const SiteId&, const SiteId&) = default;

    std::string text() const {
        std::string out = "[";
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) out += '.';
            out += std::to_string(path[i]);
        }
        out += ']';
        switch (kind) {
            case Kind::Command: out += "cmd"; break;
            case Kind::Condition: out += "cond"; break;
            case Kind::Argument: out += "arg"; break;
        }
        return out;
    }
};

namespace detail {

template <typename Fn>
void walk_statements(const std::vector<Statement>& stmts, std::vector<int>& path, Fn&& fn) {
    for (int i = 0; i < static_cast<int>(stmts.size()); ++i) {
        path.push_back(i);
        const Statement& s = stmts[i];
        fn(s, path);
        if (const auto* iff = s.as_if()) {
            path.push_back(0);
            walk_statements(iff->then_branch, path, fn);
            path.back() = 1;
            walk_statements(iff->else_branch, path, fn);
            path.pop_back();
        } else if (const auto* rep = s.as_repeat()) {
            path.push_back(0);
            walk_statements(rep->body, path, fn);
            path.pop_back();
        }
        path.pop_back();
    }
}

}  // namespace detail

/// Depth-first visit of every statement with its path.
template <typename Fn>
void for_each_statement(const Program& p, Fn&& fn) {
    std::vector<int> path;
    detail::walk_statements(p.statements, path, fn);
}

/// Resolves a statement path; nullptr when the path does not address a node.
inline const Statement* resolve_statement(const Program& p, const std::vector<int>& path) {
    const std::vector<Statement>* level = &p.statements;
    const Statement* found = nullptr;
    std::size_t i = 0;
    while (i < path.size()) {
        const int idx = path[i];
        if (idx < 0 || idx >= static_cast<int>(level->size())) return nullptr;
        found = &(*level)[idx];
        ++i;
        if (i == path.size()) return found;
        const int branch = path[i];
        ++i;
        if (const auto* iff = found->as_if()) {
            if (branch == 0) level = &iff->then_branch;
            else if (branch == 1) level = &iff->else_branch;
            else return nullptr;
        } else if (const auto* rep = found->as_repeat()) {
            if (branch != 0) return nullptr;
            level = &rep->body;
        } else {
            return nullptr;
        }
    }
    return nullptr;
}

/// Mutable variant of resolve_statement, for operators editing a copy.
inline Statement* resolve_statement(Program& p, const std::vector<int>& path) {
    return const_cast<Statement*>(resolve_statement(static_cast<const Program&>(p), path));
}

}  // namespace robomut
