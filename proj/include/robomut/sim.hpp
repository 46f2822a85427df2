#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "robomut/ast.hpp"
#include "robomut/sensors.hpp"
#include "robomut/unparse.hpp"
#include "robomut/world.hpp"

namespace robomut {

enum class StepResult { Ok, Infeasible, Invalid };

namespace detail {

inline double normalize_heading(double degrees) {
    double h = std::fmod(degrees, 360.0);
    if (h < 0.0) h += 360.0;
    return h;
}

inline bool feasible(const ScenarioSpec& scenario, const Vec3& p) {
    return scenario.inside_workspace(p) && p[2] >= 0.0;
}

/// Re-places the effector on its circle around the base origin at the given
/// heading, keeping the horizontal radius unchanged.
inline void rotate_to_heading(WorldState& w, double heading) {
    const double radius = std::hypot(w.effector[0], w.effector[1]);
    const double rad = heading * (3.14159265358979323846 / 180.0);
    w.heading = heading;
    w.effector[0] = radius * std::cos(rad);
    w.effector[1] = radius * std::sin(rad);
}

inline void attach_held_box(WorldState& w) {
    if (!w.held) return;
    BoxState* box = w.find_box(*w.held);
    box->position = w.effector;
}

}  // namespace detail

/// Applies one command with already-resolved arguments (numbers and words;
/// probes must have been evaluated by the interpreter). On success the world
/// is updated in place; on Infeasible/Invalid it is left untouched and
/// `error` receives a description. `step` is the 1-based command ordinal used
/// for event logging. `window` is advanced on grasp/placement.
inline StepResult step_command(WorldState& w, const ScenarioSpec& scenario,
                               const Command& cmd, int step, WindowState& window,
                               std::string* error = nullptr) {
    auto fail_invalid = [&](const std::string& m) {
        if (error) *error = m;
        return StepResult::Invalid;
    };
    auto fail_infeasible = [&](const std::string& m) {
        if (error) *error = m;
        return StepResult::Infeasible;
    };

    const auto kind = verb_kind(cmd.verb);
    if (!kind) return fail_invalid("unknown command '" + cmd.verb + "'");

    auto numeric_arg = [&](std::size_t i, double& out) {
        if (i >= cmd.args.size()) return false;
        if (const auto* num = std::get_if<double>(&cmd.args[i])) {
            out = *num;
            return true;
        }
        return false;
    };
    auto word_arg = [&](std::size_t i, std::string& out) {
        if (i >= cmd.args.size()) return false;
        if (const auto* word = std::get_if<std::string>(&cmd.args[i])) {
            out = *word;
            return true;
        }
        return false;
    };

    // motion commands first compute the target, then commit only if feasible
    auto commit_move = [&](const Vec3& target) {
        if (!detail::feasible(scenario, target))
            return fail_infeasible("effector would leave the workspace");
        w.effector = target;
        detail::attach_held_box(w);
        return StepResult::Ok;
    };

    switch (*kind) {
        case VerbKind::Move:
        case VerbKind::MoveTo: {
            std::string axis;
            double value = 0.0;
            if (!word_arg(0, axis) || (axis != "x" && axis != "y" && axis != "z") ||
                !numeric_arg(1, value))
                return fail_invalid("'" + cmd.verb + "' needs (axis, value)");
            const int idx = axis == "x" ? 0 : axis == "y" ? 1 : 2;
            Vec3 target = w.effector;
            target[idx] = (*kind == VerbKind::Move) ? target[idx] + value : value;
            return commit_move(target);
        }
        case VerbKind::Lift:
        case VerbKind::Drop: {
            double value = 0.0;
            if (!numeric_arg(0, value))
                return fail_invalid("'" + cmd.verb + "' needs a numeric argument");
            Vec3 target = w.effector;
            target[2] += (*kind == VerbKind::Lift) ? value : -value;
            return commit_move(target);
        }
        case VerbKind::Turn:
        case VerbKind::TurnLeft:
        case VerbKind::TurnRight: {
            double value = 0.0;
            if (!numeric_arg(0, value))
                return fail_invalid("'" + cmd.verb + "' needs a numeric argument");
            double heading = 0.0;
            if (*kind == VerbKind::Turn) heading = detail::normalize_heading(value);
            else if (*kind == VerbKind::TurnLeft)
                heading = detail::normalize_heading(w.heading + value);
            else heading = detail::normalize_heading(w.heading - value);
            WorldState trial = w;
            detail::rotate_to_heading(trial, heading);
            if (!detail::feasible(scenario, trial.effector))
                return fail_infeasible("rotation would leave the workspace");
            w.heading = trial.heading;
            w.effector = trial.effector;
            detail::attach_held_box(w);
            return StepResult::Ok;
        }
        case VerbKind::Pick: {
            if (!w.gripper_open) {
                w.events.push_back({Event::Kind::RedundantClose, step});
                return StepResult::Ok;
            }
            w.gripper_open = false;
            const BoxState* best = nullptr;
            double best_d2 = 0.0;
            for (const auto& box : w.boxes) {
                double d2 = 0.0;
                for (int i = 0; i < 3; ++i) {
                    const double d = box.position[i] - w.effector[i];
                    d2 += d * d;
                }
                if (d2 <= scenario.grasp_radius * scenario.grasp_radius &&
                    (!best || d2 < best_d2)) {
                    best = &box;
                    best_d2 = d2;
                }
            }
            if (best) {
                w.held = best->id;
                BoxState* box = w.find_box(best->id);
                box->position = w.effector;
                box->supported_on = "held";
                window.on_grasp();
            } else {
                w.events.push_back({Event::Kind::GraspOnAir, step});
            }
            return StepResult::Ok;
        }
        case VerbKind::Release: {
            if (w.gripper_open) {
                w.events.push_back({Event::Kind::RedundantOpen, step});
                return StepResult::Ok;
            }
            w.gripper_open = true;
            if (w.held) {
                BoxState* box = w.find_box(*w.held);
                const auto [name, top] =
                    support_under(scenario, w.effector[0], w.effector[1]);
                box->position = {w.effector[0], w.effector[1], top};
                box->supported_on = name;
                w.held.reset();
                window.on_place();
            }
            return StepResult::Ok;
        }
        case VerbKind::Wait: {
            double value = 0.0;
            if (!numeric_arg(0, value) || value < 0.0)
                return fail_invalid("'wait' needs a non-negative duration");
            w.clock += value;
            return StepResult::Ok;
        }
        case VerbKind::Goto: {
            std::string name;
            if (!word_arg(0, name)) return fail_invalid("'goto' needs a location name");
            const auto it = scenario.locations.find(name);
            if (it == scenario.locations.end())
                return fail_invalid("unknown location '" + name + "'");
            return commit_move(it->second);
        }
    }
    return fail_invalid("unreachable verb");
}

// --- full program execution ----------------------------------------------

struct TraceStep {
    SiteId site;
    std::string resolved;  // e.g. "moveto/x/0.108"
    WorldState after;
    WindowState window;
};

/// Execution trace: initial snapshot plus one entry per executed command.
struct Trace {
    enum class Status { Completed, InvalidCommand, Infeasible };

    WorldState initial;
    std::vector<TraceStep> steps;
    Status status = Status::Completed;
    std::string abort_reason;
    std::optional<SiteId> abort_site;

    const WorldState& final_state() const {
        return steps.empty() ? initial : steps.back().after;
    }
    WindowState final_window() const {
        return steps.empty() ? WindowState{} : steps.back().window;
    }
    /// 1-based ordinal of the aborting command; 0 if the run completed.
    int abort_command_index() const {
        return status == Status::Completed ? 0 : static_cast<int>(steps.size()) + 1;
    }

    static const char* status_text(Status s) {
        switch (s) {
            case Status::Completed: return "completed";
            case Status::InvalidCommand: return "invalid-command";
            default: return "infeasible";
        }
    }
};

/// Independent seeds for the two random streams of a run: environment
/// randomization (shared by every mutant of a round) and sensor noise
/// (distinct per mutant).
struct RunSeeds {
    std::uint64_t env = 0;
    std::uint64_t sensor = 0;
};

namespace detail {

class Interpreter {
public:
    Interpreter(const ScenarioSpec& scenario, const std::vector<SensorFault>& faults,
                Rng& sensor_rng, Trace& trace)
        : scenario_(scenario), faults_(faults), sensor_rng_(sensor_rng), trace_(trace) {}

    void run(const Program& p, WorldState& w) {
        exec_block(p.statements, {}, w);
    }

private:
    bool exec_block(const std::vector<Statement>& stmts, std::vector<int> prefix,
                    WorldState& w) {
        for (int i = 0; i < static_cast<int>(stmts.size()); ++i) {
            std::vector<int> path = prefix;
            path.push_back(i);
            if (!exec_statement(stmts[i], path, w)) return false;
        }
        return true;
    }

    bool exec_statement(const Statement& s, const std::vector<int>& path, WorldState& w) {
        if (const auto* cmd = s.as_command()) return exec_command(*cmd, path, w);
        if (const auto* iff = s.as_if()) return exec_if(*iff, path, w);
        const auto* rep = s.as_repeat();
        for (long long k = 0; k < rep->count; ++k) {
            std::vector<int> body_prefix = path;
            body_prefix.push_back(0);
            if (!exec_block(rep->body, body_prefix, w)) return false;
        }
        return true;
    }

    bool exec_command(const Command& cmd, const std::vector<int>& path, WorldState& w) {
        const SiteId site{path, SiteId::Kind::Command};
        Command resolved;
        resolved.verb = cmd.verb;
        for (const Arg& arg : cmd.args) {
            if (const auto* probe = std::get_if<Probe>(&arg)) {
                const auto channel = ChannelId::parse(probe->channel);
                if (!channel || !channel->numeric())
                    return abort_invalid(site, "unreadable channel '" + probe->channel + "'");
                double raw = 0.0;
                try {
                    raw = std::get<double>(
                        read_sensor(w, *channel, faults_, window_, sensor_rng_));
                } catch (const UnknownChannel& e) {
                    return abort_invalid(site, e.what());
                }
                double value = raw + probe->offset;
                if (probe->negated) value = -value;
                resolved.args.emplace_back(value);
            } else {
                resolved.args.push_back(arg);
            }
        }

        std::string error;
        const StepResult result =
            step_command(w, scenario_, resolved, static_cast<int>(trace_.steps.size()) + 1,
                         window_, &error);
        if (result == StepResult::Invalid) return abort_invalid(site, error);
        if (result == StepResult::Infeasible) {
            trace_.status = Trace::Status::Infeasible;
            trace_.abort_reason = error;
            trace_.abort_site = site;
            return false;
        }
        TraceStep step;
        step.site = site;
        step.resolved = resolved_text(resolved);
        step.after = w;
        step.window = window_;
        trace_.steps.push_back(std::move(step));
        return true;
    }

    bool exec_if(const If& iff, const std::vector<int>& path, WorldState& w) {
        const SiteId site{path, SiteId::Kind::Condition};
        const auto channel = ChannelId::parse(iff.channel);
        if (!channel) return abort_invalid(site, "unreadable channel '" + iff.channel + "'");
        SensorValue value;
        try {
            value = read_sensor(w, *channel, faults_, window_, sensor_rng_);
        } catch (const UnknownChannel& e) {
            return abort_invalid(site, e.what());
        }

        bool taken = false;
        if (const auto* text = std::get_if<std::string>(&value)) {
            const auto* lit = std::get_if<std::string>(&iff.literal);
            if (!lit) return abort_invalid(site, "comparing a color against a number");
            if (iff.cmp == Comparator::Lt || iff.cmp == Comparator::Gt)
                return abort_invalid(site, "ordered comparison on a color");
            taken = (iff.cmp == Comparator::Eq) == (*text == *lit);
        } else {
            const auto* lit = std::get_if<double>(&iff.literal);
            if (!lit) return abort_invalid(site, "comparing a number against a string");
            const double v = std::get<double>(value);
            switch (iff.cmp) {
                case Comparator::Eq: taken = v == *lit; break;
                case Comparator::Ne: taken = v != *lit; break;
                case Comparator::Lt: taken = v < *lit; break;
                case Comparator::Gt: taken = v > *lit; break;
            }
        }

        std::vector<int> branch_prefix = path;
        branch_prefix.push_back(taken ? 0 : 1);
        return exec_block(taken ? iff.then_branch : iff.else_branch, branch_prefix, w);
    }

    bool abort_invalid(const SiteId& site, const std::string& reason) {
        trace_.status = Trace::Status::InvalidCommand;
        trace_.abort_reason = reason;
        trace_.abort_site = site;
        return false;
    }

    static std::string resolved_text(const Command& cmd) {
        std::string out = cmd.verb;
        for (const Arg& arg : cmd.args) {
            out += '/';
            if (const auto* num = std::get_if<double>(&arg)) out += format_number(*num);
            else if (const auto* word = std::get_if<std::string>(&arg)) out += *word;
        }
        return out;
    }

    const ScenarioSpec& scenario_;
    const std::vector<SensorFault>& faults_;
    Rng& sensor_rng_;
    Trace& trace_;
    WindowState window_;
};

}  // namespace detail

/// Runs a program against a scenario with the given sensor faults. Probe
/// arguments and if-conditions read through the fault layer, so sensor
/// faults propagate into motion targets and branching. The same inputs and
/// seeds always produce the same trace.
inline Trace run_program(const Program& p, const ScenarioSpec& scenario,
                         const std::vector<SensorFault>& faults, RunSeeds seeds) {
    Rng env(seeds.env);
    Rng sensor(seeds.sensor);
    Trace trace;
    WorldState w = init_world(scenario, env);
    trace.initial = w;
    detail::Interpreter interp(scenario, faults, sensor, trace);
    interp.run(p, w);
    return trace;
}

}  // namespace robomut
