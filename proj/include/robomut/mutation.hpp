#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "robomut/ast.hpp"
#include "robomut/parse.hpp"
#include "robomut/sensors.hpp"
#include "robomut/unparse.hpp"

namespace robomut {

/// A mutation rule plus its kind-specific parameters. Applicability is a
/// pure predicate of the targeted AST node; apply_operator never modifies
/// the original program.
struct MutationOperator {
    enum class Family { Domain, Classical, NaiveString };
    enum class Kind {
        RotationFlip,
        TranslationSignFlip,
        ByToAbsolute,
        CommandDelete,
        CommandDuplicate,
        GripperOpposite,
        SensorNegate,
        SensorNoise,
        RORCompare,
        ConstantNegate,
        NaiveCharEdit,
        RotationPerturb,  // demo operator for near-equivalent mutants; not in any preset
    };

    Kind kind = Kind::RotationFlip;

    // kind-specific parameters
    Comparator ror_to = Comparator::Eq;   // RORCompare: replacement comparator
    int char_pos = 0;                     // NaiveCharEdit: payload position
    bool char_delete = true;              // NaiveCharEdit: delete vs substitute
    char char_replacement = 'a';          // NaiveCharEdit: substitution character
    double perturb_degrees = 1.0;         // RotationPerturb

    Family family() const {
        switch (kind) {
            case Kind::RORCompare:
            case Kind::ConstantNegate:
            case Kind::RotationPerturb:
                return Family::Classical;
            case Kind::NaiveCharEdit:
                return Family::NaiveString;
            default:
                return Family::Domain;
        }
    }

    static const char* kind_text(Kind k) {
        switch (k) {
            case Kind::RotationFlip: return "RotationFlip";
            case Kind::TranslationSignFlip: return "TranslationSignFlip";
            case Kind::ByToAbsolute: return "ByToAbsolute";
            case Kind::CommandDelete: return "CommandDelete";
            case Kind::CommandDuplicate: return "CommandDuplicate";
            case Kind::GripperOpposite: return "GripperOpposite";
            case Kind::SensorNegate: return "SensorNegate";
            case Kind::SensorNoise: return "SensorNoise";
            case Kind::RORCompare: return "RORCompare";
            case Kind::ConstantNegate: return "ConstantNegate";
            case Kind::NaiveCharEdit: return "NaiveCharEdit";
            default: return "RotationPerturb";
        }
    }

    static const char* family_text(Family f) {
        switch (f) {
            case Family::Domain: return "domain";
            case Family::Classical: return "classical";
            default: return "naive-string";
        }
    }

    /// Site kind the operator targets.
    static SiteId::Kind target_site_kind(Kind k) {
        switch (k) {
            case Kind::RORCompare: return SiteId::Kind::Condition;
            case Kind::ConstantNegate: return SiteId::Kind::Argument;
            default: return SiteId::Kind::Command;
        }
    }
};

/// One seeded fault: either a single-site program edit (carrying its own
/// mutated copy of the program) or a sensor-layer injection that leaves the
/// program byte-identical.
struct Mutant {
    int id = 0;
    MutationOperator::Family family = MutationOperator::Family::Domain;
    MutationOperator::Kind kind = MutationOperator::Kind::RotationFlip;
    std::string description;
    std::optional<SiteId> site;       // program edits only
    std::optional<Program> program;   // program edits only
    std::optional<SensorFault> fault; // sensor injections only

    bool is_program_edit() const { return program.has_value(); }
};

// --- site enumeration -----------------------------------------------------

enum class SiteFilter {
    All,
    Commands,
    Conditions,
    NumericArguments,
    TranslationCommands,
    RotationCommands,
    AbsoluteTurnCommands,
    GripperCommands,
    MoveCommands,
};

/// Document-order (depth-first) list of sites matching the filter.
/// Enumerable sites are command statements, if-conditions, and numeric
/// literal arguments; each resolves to exactly one AST node.
inline std::vector<SiteId> enumerate_sites(const Program& p, SiteFilter filter) {
    std::vector<SiteId> out;
    for_each_statement(p, [&](const Statement& s, const std::vector<int>& path) {
        if (const auto* cmd = s.as_command()) {
            const auto kind = verb_kind(cmd->verb);
            bool command_matches = false;
            switch (filter) {
                case SiteFilter::All:
                case SiteFilter::Commands:
                    command_matches = true;
                    break;
                case SiteFilter::TranslationCommands:
                    command_matches = kind && is_translation_verb(*kind);
                    break;
                case SiteFilter::RotationCommands:
                    command_matches = kind && is_rotation_verb(*kind);
                    break;
                case SiteFilter::AbsoluteTurnCommands:
                    command_matches = kind && *kind == VerbKind::Turn;
                    break;
                case SiteFilter::GripperCommands:
                    command_matches = kind && is_gripper_verb(*kind);
                    break;
                case SiteFilter::MoveCommands:
                    command_matches = kind && *kind == VerbKind::Move;
                    break;
                default:
                    break;
            }
            if (command_matches) out.push_back({path, SiteId::Kind::Command});
            if (filter == SiteFilter::All || filter == SiteFilter::NumericArguments) {
                for (int a = 0; a < static_cast<int>(cmd->args.size()); ++a) {
                    if (std::holds_alternative<double>(cmd->args[a])) {
                        std::vector<int> arg_path = path;
                        arg_path.push_back(a);
                        out.push_back({arg_path, SiteId::Kind::Argument});
                    }
                }
            }
        } else if (s.as_if()) {
            if (filter == SiteFilter::All || filter == SiteFilter::Conditions)
                out.push_back({path, SiteId::Kind::Condition});
        }
    });
    return out;
}

// --- operator application --------------------------------------------------

namespace detail {

struct ParentList {
    std::vector<Statement>* list = nullptr;
    int index = -1;
};

/// Parent statement list and index for a statement path.
inline ParentList locate_statement(Program& p, const std::vector<int>& path) {
    if (path.empty()) return {};
    std::vector<Statement>* level = &p.statements;
    std::size_t i = 0;
    for (;;) {
        const int idx = path[i];
        if (idx < 0 || idx >= static_cast<int>(level->size())) return {};
        if (i + 1 == path.size()) return {level, idx};
        Statement& s = (*level)[idx];
        const int branch = path[i + 1];
        if (auto* iff = std::get_if<If>(&s.node)) {
            if (branch == 0) level = &iff->then_branch;
            else if (branch == 1) level = &iff->else_branch;
            else return {};
        } else if (auto* rep = std::get_if<Repeat>(&s.node)) {
            if (branch != 0) return {};
            level = &rep->body;
        } else {
            return {};
        }
        i += 2;
        if (i >= path.size()) return {};
    }
}

inline std::string payload_text(const Command& cmd) {
    std::string out = cmd.verb;
    for (const Arg& a : cmd.args) {
        out += '/';
        out += format_arg(a);
    }
    return out;
}

}  // namespace detail

/// Applies an operator at a site of a copy of `p`. Returns the mutated
/// program, or nullopt when the operator does not apply to that node.
/// The mutated program differs from the original at exactly that site.
inline std::optional<Program> apply_edit(const Program& p, const MutationOperator& op,
                                         const SiteId& site) {
    if (site.kind != MutationOperator::target_site_kind(op.kind)) return std::nullopt;
    Program mutated = p;

    switch (op.kind) {
        case MutationOperator::Kind::RotationFlip: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd) return std::nullopt;
            const auto kind = verb_kind(cmd->verb);
            if (!kind) return std::nullopt;
            if (*kind == VerbKind::TurnLeft) {
                cmd->verb = "turnright";
                return mutated;
            }
            if (*kind == VerbKind::TurnRight) {
                cmd->verb = "turnleft";
                return mutated;
            }
            if (*kind == VerbKind::Turn && cmd->args.size() == 1) {
                if (auto* angle = std::get_if<double>(&cmd->args[0])) {
                    // 90 <-> 270: mirror the absolute heading
                    *angle = std::fmod(360.0 - *angle, 360.0);
                    if (*angle < 0.0) *angle += 360.0;
                    return mutated;
                }
            }
            return std::nullopt;
        }
        case MutationOperator::Kind::TranslationSignFlip: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd) return std::nullopt;
            const auto kind = verb_kind(cmd->verb);
            if (!kind || !is_translation_verb(*kind)) return std::nullopt;
            const std::size_t arg_index =
                (*kind == VerbKind::Move || *kind == VerbKind::MoveTo) ? 1 : 0;
            if (arg_index >= cmd->args.size()) return std::nullopt;
            Arg& arg = cmd->args[arg_index];
            if (auto* num = std::get_if<double>(&arg)) {
                *num = -*num;
                return mutated;
            }
            if (auto* probe = std::get_if<Probe>(&arg)) {
                probe->negated = !probe->negated;
                return mutated;
            }
            return std::nullopt;
        }
        case MutationOperator::Kind::ByToAbsolute: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd) return std::nullopt;
            const auto kind = verb_kind(cmd->verb);
            if (!kind || *kind != VerbKind::Move) return std::nullopt;
            cmd->verb = "moveto";  // keeps the numeral: by delta -> to coordinate
            return mutated;
        }
        case MutationOperator::Kind::CommandDelete:
        case MutationOperator::Kind::CommandDuplicate: {
            auto parent = detail::locate_statement(mutated, site.path);
            if (!parent.list) return std::nullopt;
            Statement& s = (*parent.list)[parent.index];
            if (!s.as_command()) return std::nullopt;
            if (op.kind == MutationOperator::Kind::CommandDelete) {
                parent.list->erase(parent.list->begin() + parent.index);
            } else {
                Statement copy = s;  // copy first: insertion may reallocate
                parent.list->insert(parent.list->begin() + parent.index, std::move(copy));
            }
            return mutated;
        }
        case MutationOperator::Kind::GripperOpposite: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd) return std::nullopt;
            const auto kind = verb_kind(cmd->verb);
            if (!kind || !is_gripper_verb(*kind)) return std::nullopt;
            cmd->verb = *kind == VerbKind::Pick ? "release" : "pick";
            return mutated;
        }
        case MutationOperator::Kind::RORCompare: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* iff = s ? std::get_if<If>(&s->node) : nullptr;
            if (!iff || iff->cmp == op.ror_to) return std::nullopt;
            iff->cmp = op.ror_to;
            return mutated;
        }
        case MutationOperator::Kind::ConstantNegate: {
            if (site.path.empty()) return std::nullopt;
            std::vector<int> cmd_path(site.path.begin(), site.path.end() - 1);
            const int arg_index = site.path.back();
            Statement* s = resolve_statement(mutated, cmd_path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd || arg_index < 0 || arg_index >= static_cast<int>(cmd->args.size()))
                return std::nullopt;
            if (auto* num = std::get_if<double>(&cmd->args[arg_index])) {
                *num = -*num;
                return mutated;
            }
            return std::nullopt;
        }
        case MutationOperator::Kind::NaiveCharEdit: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd) return std::nullopt;
            std::string payload = detail::payload_text(*cmd);
            if (op.char_pos < 0 || op.char_pos >= static_cast<int>(payload.size()))
                return std::nullopt;
            if (op.char_delete)
                payload.erase(static_cast<std::size_t>(op.char_pos), 1);
            else if (payload[static_cast<std::size_t>(op.char_pos)] == op.char_replacement)
                return std::nullopt;
            else
                payload[static_cast<std::size_t>(op.char_pos)] = op.char_replacement;
            *cmd = detail::parse_payload(payload);
            return mutated;
        }
        case MutationOperator::Kind::RotationPerturb: {
            Statement* s = resolve_statement(mutated, site.path);
            auto* cmd = s ? std::get_if<Command>(&s->node) : nullptr;
            if (!cmd) return std::nullopt;
            const auto kind = verb_kind(cmd->verb);
            if (!kind || *kind != VerbKind::Turn || cmd->args.size() != 1) return std::nullopt;
            if (auto* angle = std::get_if<double>(&cmd->args[0])) {
                *angle = std::fmod(*angle + op.perturb_degrees, 360.0);
                if (*angle < 0.0) *angle += 360.0;
                return mutated;
            }
            return std::nullopt;
        }
        default:
            return std::nullopt;  // sensor kinds are injections, not edits
    }
}

/// Builds a program-edit mutant (id and description filled by the catalog).
/// Edits that leave the program unchanged (sign flip of 0, rotation flip of
/// a 0/180 degree turn) are treated as not applicable: every emitted mutant
/// really differs from the original.
inline std::optional<Mutant> apply_operator(const Program& p, const MutationOperator& op,
                                            const SiteId& site) {
    auto mutated = apply_edit(p, op, site);
    if (!mutated) return std::nullopt;
    if (*mutated == p) return std::nullopt;
    Mutant m;
    m.family = op.family();
    m.kind = op.kind;
    m.site = site;
    m.program = std::move(*mutated);
    return m;
}

/// Builds a sensor-injection mutant; the program is left untouched.
inline Mutant make_sensor_mutant(MutationOperator::Kind kind, const ChannelId& channel,
                                 FaultWindow window, const NoiseSpec& noise) {
    Mutant m;
    m.family = MutationOperator::Family::Domain;
    m.kind = kind;
    SensorFault fault;
    fault.channel = channel;
    fault.kind = kind == MutationOperator::Kind::SensorNegate ? SensorFault::Kind::Negate
                                                              : SensorFault::Kind::AddNoise;
    fault.window = window;
    if (fault.kind == SensorFault::Kind::AddNoise) fault.noise = noise;
    m.fault = fault;
    return m;
}

}  // namespace robomut
