#pragma once

#include <string>
#include <vector>

#include "robomut/ast.hpp"

namespace robomut {

/// Static violation. Violations are data, not errors: mutant programs are
/// expected to produce them and are classified Invalid without execution.
struct Violation {
    enum class Code {
        UnknownVerb,
        Arity,
        BadArgument,
        UnknownChannel,
        TypeMismatch,
        NegativeAngle,
        NegativeWait,
        NonPositiveRepeat,
    };

    SiteId site;
    Code code;
    std::string message;
};

namespace detail {

inline void check_command(const Command& cmd, const std::vector<int>& path,
                          std::vector<Violation>& out) {
    const SiteId site{path, SiteId::Kind::Command};
    const auto kind = verb_kind(cmd.verb);
    if (!kind) {
        out.push_back({site, Violation::Code::UnknownVerb,
                       "unknown command '" + cmd.verb + "'"});
        return;
    }

    auto is_numeric_or_probe = [&](const Arg& a, bool* is_literal_number = nullptr,
                                   double* value = nullptr) {
        if (const auto* num = std::get_if<double>(&a)) {
            if (is_literal_number) *is_literal_number = true;
            if (value) *value = *num;
            return true;
        }
        if (std::holds_alternative<Probe>(a)) {
            if (is_literal_number) *is_literal_number = false;
            return true;
        }
        return false;
    };
    auto check_probe_channel = [&](const Arg& a) {
        if (const auto* probe = std::get_if<Probe>(&a)) {
            if (!ChannelId::parse(probe->channel))
                out.push_back({site, Violation::Code::UnknownChannel,
                               "unknown channel '" + probe->channel + "'"});
        }
    };

    switch (*kind) {
        case VerbKind::Pick:
        case VerbKind::Release:
            if (!cmd.args.empty())
                out.push_back({site, Violation::Code::Arity,
                               "'" + cmd.verb + "' takes no arguments"});
            break;
        case VerbKind::Move:
        case VerbKind::MoveTo: {
            if (cmd.args.size() != 2) {
                out.push_back({site, Violation::Code::Arity,
                               "'" + cmd.verb + "' takes (axis, value)"});
                break;
            }
            const auto* axis = std::get_if<std::string>(&cmd.args[0]);
            if (!axis || (*axis != "x" && *axis != "y" && *axis != "z"))
                out.push_back({site, Violation::Code::BadArgument,
                               "'" + cmd.verb + "' needs axis x, y, or z"});
            if (!is_numeric_or_probe(cmd.args[1]))
                out.push_back({site, Violation::Code::BadArgument,
                               "'" + cmd.verb + "' needs a numeric value"});
            check_probe_channel(cmd.args[1]);
            break;
        }
        case VerbKind::Lift:
        case VerbKind::Drop:
        case VerbKind::Turn:
        case VerbKind::TurnLeft:
        case VerbKind::TurnRight:
        case VerbKind::Wait: {
            if (cmd.args.size() != 1) {
                out.push_back({site, Violation::Code::Arity,
                               "'" + cmd.verb + "' takes one numeric argument"});
                break;
            }
            bool literal = false;
            double value = 0.0;
            if (!is_numeric_or_probe(cmd.args[0], &literal, &value)) {
                out.push_back({site, Violation::Code::BadArgument,
                               "'" + cmd.verb + "' needs a numeric value"});
                break;
            }
            check_probe_channel(cmd.args[0]);
            // absolute turn angles must be non-negative; they are normalized
            // into [0, 360) at execution. Signed deltas stay legal elsewhere.
            if (*kind == VerbKind::Turn && literal && value < 0.0)
                out.push_back({site, Violation::Code::NegativeAngle,
                               "absolute turn angle must be >= 0"});
            if (*kind == VerbKind::Wait && literal && value < 0.0)
                out.push_back({site, Violation::Code::NegativeWait,
                               "wait duration must be >= 0"});
            break;
        }
        case VerbKind::Goto: {
            const auto* name =
                cmd.args.size() == 1 ? std::get_if<std::string>(&cmd.args[0]) : nullptr;
            if (!name || name->empty())
                out.push_back({site, Violation::Code::Arity,
                               "'goto' takes one location name"});
            break;
        }
    }
}

}  // namespace detail

/// Checks verbs, arities, argument kinds, channels, repeat counts, and
/// comparator/literal typing. An empty result means the program executes in
/// the simulator without unknown-command or arity failures.
inline std::vector<Violation> validate_program(const Program& p) {
    std::vector<Violation> out;
    for_each_statement(p, [&](const Statement& s, const std::vector<int>& path) {
        if (const auto* cmd = s.as_command()) {
            detail::check_command(*cmd, path, out);
        } else if (const auto* iff = s.as_if()) {
            const SiteId site{path, SiteId::Kind::Condition};
            const auto channel = ChannelId::parse(iff->channel);
            if (!channel) {
                out.push_back({site, Violation::Code::UnknownChannel,
                               "unknown channel '" + iff->channel + "'"});
            } else {
                const bool want_string = !channel->numeric();
                const bool is_string = std::holds_alternative<std::string>(iff->literal);
                if (want_string != is_string)
                    out.push_back({site, Violation::Code::TypeMismatch,
                                   "literal kind does not match channel '" +
                                       iff->channel + "'"});
                if (want_string &&
                    (iff->cmp == Comparator::Lt || iff->cmp == Comparator::Gt))
                    out.push_back({site, Violation::Code::TypeMismatch,
                                   "ordered comparison on a non-numeric channel"});
            }
        } else if (const auto* rep = s.as_repeat()) {
            if (rep->count < 1)
                out.push_back({SiteId{path, SiteId::Kind::Command},
                               Violation::Code::NonPositiveRepeat,
                               "repeat count must be >= 1"});
        }
    });
    return out;
}

}  // namespace robomut
