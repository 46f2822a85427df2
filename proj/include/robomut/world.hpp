#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "robomut/rng.hpp"
#include "robomut/scenario.hpp"

namespace robomut {

/// Notable simulator events. These never fail a run by themselves; they are
/// logged so reports can show what a mutant actually did.
struct Event {
    enum class Kind { GraspOnAir, RedundantClose, RedundantOpen };

    Kind kind;
    int step = 0;  // command index within the run, 1-based

    static const char* kind_text(Kind k) {
        switch (k) {
            case Kind::GraspOnAir: return "grasp-on-air";
            case Kind::RedundantClose: return "redundant-close";
            default: return "redundant-open";
        }
    }
};

struct BoxState {
    int id = 0;
    std::string color;
    Vec3 position{};
    std::string supported_on;  // surface name, "held", or "floor"

    friend bool operator==(const BoxState&, const BoxState&) = default;
};

/// Ground-truth simulation state. Invariants maintained by the simulator:
/// the effector stays inside the workspace, a held box's position equals the
/// effector position after every step, and held implies a closed gripper.
struct WorldState {
    Vec3 effector{};
    double heading = 0.0;  // degrees in [0, 360)
    bool gripper_open = true;
    std::optional<int> held;
    std::vector<BoxState> boxes;
    double clock = 0.0;
    std::vector<Event> events;

    BoxState* find_box(int id) {
        for (auto& b : boxes)
            if (b.id == id) return &b;
        return nullptr;
    }
    const BoxState* find_box(int id) const {
        for (const auto& b : boxes)
            if (b.id == id) return &b;
        return nullptr;
    }

    /// State comparison for probable-equivalence detection: everything but
    /// the event log.
    bool same_outcome(const WorldState& other) const {
        return effector == other.effector && heading == other.heading &&
               gripper_open == other.gripper_open && held == other.held &&
               boxes == other.boxes && clock == other.clock;
    }
};

/// Top face of the highest surface under (x, y), or the floor at z = 0.
/// Returns {surface name or "floor", height}.
inline std::pair<std::string, double> support_under(const ScenarioSpec& scenario,
                                                    double x, double y) {
    std::string name = "floor";
    double top = 0.0;
    for (const auto& s : scenario.surfaces) {
        if (s.region.contains(x, y) && s.height >= top) {
            // ties go to the later declaration, which keeps resolution
            // deterministic for exactly coincident tops
            name = s.name;
            top = s.height;
        }
    }
    return {name, top};
}

/// Builds the initial world: declared robot pose, boxes placed at their
/// declared positions plus per-box jitter drawn from `env` in declaration
/// order of the randomize block. Three uniform draws are consumed per
/// randomized box even when an amplitude is zero, so streams stay aligned
/// under calibration changes; the optional color draw follows.
inline WorldState init_world(const ScenarioSpec& scenario, Rng& env) {
    WorldState w;
    w.effector = scenario.robot_position;
    w.heading = scenario.robot_heading;
    w.gripper_open = scenario.gripper_open;

    for (const auto& spec : scenario.boxes) {
        BoxState box;
        box.id = spec.id;
        box.color = spec.color;
        box.position = spec.position;
        w.boxes.push_back(box);
    }
    for (const auto& rand : scenario.randomize) {
        BoxState* box = w.find_box(rand.id);
        for (int axis = 0; axis < 3; ++axis) {
            const double a = rand.position_jitter[axis];
            const double d = env.uniform(-a, a);
            box->position[axis] += d;
        }
        if (!rand.color_choices.empty()) {
            const auto idx = static_cast<std::size_t>(
                env.next_u64() % rand.color_choices.size());
            box->color = rand.color_choices[idx];
        }
        if (!scenario.inside_workspace(box->position))
            throw ScenarioError("randomized position of box " + std::to_string(rand.id) +
                                " leaves the workspace");
    }
    for (auto& box : w.boxes) {
        const auto [name, top] = support_under(scenario, box.position[0], box.position[1]);
        box.supported_on = std::abs(box.position[2] - top) <= 1e-9 ? name : "floor";
    }
    return w;
}

}  // namespace robomut
