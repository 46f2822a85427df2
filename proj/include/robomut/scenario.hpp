#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace robomut {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

/// Truncated-Gaussian noise description for add-noise sensor faults.
/// Values are sampled from N(mean, stddev) and rejection-truncated to
/// [lo, hi]; symmetric sign mode multiplies the accepted value by a fair ±1.
struct NoiseSpec {
    double mean = 0.2215;
    double stddev = 0.0557;
    double lo = 0.053;
    double hi = 0.39;
    bool symmetric = false;  // default sign mode: positive

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;

    void validate() const {
        if (!(lo < hi)) throw ScenarioError("noise spec needs lo < hi");
        if (stddev < 0.0) throw ScenarioError("noise spec needs stddev >= 0");
        if (stddev == 0.0 && (mean < lo || mean > hi))
            throw ScenarioError("degenerate noise spec with mean outside [lo, hi]");
    }
};

struct Rect {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    bool contains(double x, double y) const {
        return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
    }
};

struct SurfaceSpec {
    std::string name;
    Rect region;
    double height = 0.0;  // z of the top face
};

struct BoxSpec {
    int id = 0;
    std::string color;  // "red" or "blue"
    Vec3 position{};
};

struct BoxRandomize {
    int id = 0;
    Vec3 position_jitter{};                  // uniform amplitude per axis
    std::vector<std::string> color_choices;  // optional
};

/// Initial-environment description: workspace, robot pose, boxes, support
/// surfaces, named locations, and the per-round randomization block.
struct ScenarioSpec {
    Vec3 workspace_min{};
    Vec3 workspace_max{};
    double grasp_radius = 0.05;

    Vec3 robot_position{};
    double robot_heading = 0.0;  // degrees in [0, 360)
    bool gripper_open = true;

    std::vector<BoxSpec> boxes;
    std::vector<SurfaceSpec> surfaces;
    std::map<std::string, Vec3> locations;
    std::vector<BoxRandomize> randomize;
    NoiseSpec noise_default;

    bool inside_workspace(const Vec3& p) const {
        for (int i = 0; i < 3; ++i)
            if (p[i] < workspace_min[i] || p[i] > workspace_max[i]) return false;
        return true;
    }

    const BoxSpec* find_box(int id) const {
        for (const auto& b : boxes)
            if (b.id == id) return &b;
        return nullptr;
    }

    void validate() const {
        for (int i = 0; i < 3; ++i)
            if (!(workspace_min[i] < workspace_max[i]))
                throw ScenarioError("workspace bounds must satisfy min < max per axis");
        if (workspace_min[2] < 0.0)
            throw ScenarioError("workspace floor must be at z >= 0");
        if (!(grasp_radius > 0.0)) throw ScenarioError("grasp_radius must be > 0");
        if (!inside_workspace(robot_position))
            throw ScenarioError("robot start position outside the workspace");
        if (robot_heading < 0.0 || robot_heading >= 360.0)
            throw ScenarioError("robot heading must lie in [0, 360)");
        for (const auto& b : boxes) {
            if (b.color != "red" && b.color != "blue")
                throw ScenarioError("box color must be red or blue");
            if (!inside_workspace(b.position))
                throw ScenarioError("box " + std::to_string(b.id) +
                                    " declared outside the workspace");
            int count = 0;
            for (const auto& other : boxes)
                if (other.id == b.id) ++count;
            if (count != 1)
                throw ScenarioError("duplicate box id " + std::to_string(b.id));
        }
        for (const auto& s : surfaces) {
            if (!(s.region.min_x < s.region.max_x) || !(s.region.min_y < s.region.max_y))
                throw ScenarioError("surface '" + s.name + "' has an empty region");
            if (s.height < 0.0)
                throw ScenarioError("surface '" + s.name + "' is below the floor");
        }
        for (const auto& r : randomize) {
            if (!find_box(r.id))
                throw ScenarioError("randomize block names unknown box " +
                                    std::to_string(r.id));
            for (double a : r.position_jitter)
                if (a < 0.0) throw ScenarioError("position_jitter must be >= 0");
            for (const auto& c : r.color_choices)
                if (c != "red" && c != "blue")
                    throw ScenarioError("color_choices must be red or blue");
        }
        noise_default.validate();
    }
};

namespace detail {

inline Vec3 vec3_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3)
        throw ScenarioError(what + " must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace detail

/// Loads a scenario from its JSON file format and validates it.
inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    try {
        ScenarioSpec s;
        const auto& ws = j.at("workspace");
        s.workspace_min = detail::vec3_from_json(ws.at("min"), "workspace.min");
        s.workspace_max = detail::vec3_from_json(ws.at("max"), "workspace.max");
        s.grasp_radius = j.at("grasp_radius").get<double>();

        const auto& robot = j.at("robot");
        s.robot_position = detail::vec3_from_json(robot.at("position"), "robot.position");
        s.robot_heading = robot.value("heading", 0.0);
        const std::string gripper = robot.value("gripper", "open");
        if (gripper != "open" && gripper != "closed")
            throw ScenarioError("robot.gripper must be open or closed");
        s.gripper_open = gripper == "open";

        for (const auto& b : j.value("boxes", nlohmann::json::array())) {
            BoxSpec box;
            box.id = b.at("id").get<int>();
            box.color = b.at("color").get<std::string>();
            box.position = detail::vec3_from_json(b.at("position"), "box position");
            s.boxes.push_back(box);
        }
        for (const auto& f : j.value("surfaces", nlohmann::json::array())) {
            SurfaceSpec surf;
            surf.name = f.at("name").get<std::string>();
            const auto& region = f.at("region");
            const auto rmin = region.at("min");
            const auto rmax = region.at("max");
            if (!rmin.is_array() || rmin.size() != 2 || !rmax.is_array() || rmax.size() != 2)
                throw ScenarioError("surface region min/max must be 2-element arrays");
            surf.region = {rmin[0].get<double>(), rmin[1].get<double>(),
                           rmax[0].get<double>(), rmax[1].get<double>()};
            surf.height = f.at("height").get<double>();
            s.surfaces.push_back(surf);
        }
        if (j.contains("locations"))
            for (const auto& [name, pos] : j.at("locations").items())
                s.locations[name] = detail::vec3_from_json(pos, "location " + name);
        if (j.contains("randomize"))
            for (const auto& r : j.at("randomize").value("boxes", nlohmann::json::array())) {
                BoxRandomize rand;
                rand.id = r.at("id").get<int>();
                if (r.contains("position_jitter"))
                    rand.position_jitter =
                        detail::vec3_from_json(r.at("position_jitter"), "position_jitter");
                if (r.contains("color_choices"))
                    for (const auto& c : r.at("color_choices"))
                        rand.color_choices.push_back(c.get<std::string>());
                s.randomize.push_back(rand);
            }
        if (j.contains("noise_default")) {
            const auto& n = j.at("noise_default");
            s.noise_default.mean = n.at("mean").get<double>();
            s.noise_default.stddev = n.at("stddev").get<double>();
            s.noise_default.lo = n.at("lo").get<double>();
            s.noise_default.hi = n.at("hi").get<double>();
            const std::string sign = n.value("sign", "positive");
            if (sign != "positive" && sign != "symmetric")
                throw ScenarioError("noise sign must be positive or symmetric");
            s.noise_default.symmetric = sign == "symmetric";
        }

        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("malformed scenario: ") + e.what());
    }
}

inline nlohmann::json noise_to_json(const NoiseSpec& n) {
    return nlohmann::json{{"mean", n.mean},
                          {"stddev", n.stddev},
                          {"lo", n.lo},
                          {"hi", n.hi},
                          {"sign", n.symmetric ? "symmetric" : "positive"}};
}

inline NoiseSpec noise_from_json(const nlohmann::json& j) {
    NoiseSpec n;
    n.mean = j.at("mean").get<double>();
    n.stddev = j.at("stddev").get<double>();
    n.lo = j.at("lo").get<double>();
    n.hi = j.at("hi").get<double>();
    n.symmetric = j.value("sign", "positive") == "symmetric";
    n.validate();
    return n;
}

}  // namespace robomut
