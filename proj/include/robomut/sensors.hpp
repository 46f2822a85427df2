#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "robomut/rng.hpp"
#include "robomut/scenario.hpp"
#include "robomut/world.hpp"

namespace robomut {

/// Raised when a read names a channel the current world cannot answer
/// (missing box id, or no box at all for "color"). Only reachable through
/// mutants; validated programs never trigger it.
class UnknownChannel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fault activity window, measured in grasp/release progress:
///   initial   — reads before the first successful grasp
///   final     — reads after the last placement (a release that set a box down)
///   whole-run — every read
enum class FaultWindow { Initial, Final, WholeRun };

inline const char* window_text(FaultWindow w) {
    switch (w) {
        case FaultWindow::Initial: return "initial";
        case FaultWindow::Final: return "final";
        default: return "whole-run";
    }
}

inline std::optional<FaultWindow> window_from_text(const std::string& s) {
    if (s == "initial") return FaultWindow::Initial;
    if (s == "final") return FaultWindow::Final;
    if (s == "whole-run") return FaultWindow::WholeRun;
    return std::nullopt;
}

/// One injected sensor fault: negation or additive truncated-Gaussian noise
/// on a single numeric channel within a window. The program text of a run
/// with sensor faults is byte-identical to the original.
struct SensorFault {
    ChannelId channel;
    enum class Kind { Negate, AddNoise } kind = Kind::Negate;
    FaultWindow window = FaultWindow::WholeRun;
    NoiseSpec noise;  // used when kind == AddNoise

    friend bool operator==(const SensorFault&, const SensorFault&) = default;
};

/// Grasp/release progress used to decide window activity.
struct WindowState {
    bool grasped_yet = false;     // some pick attached a box
    bool placed_since_grasp = false;  // a release placed a box, no grasp after

    bool active(FaultWindow w) const {
        switch (w) {
            case FaultWindow::Initial: return !grasped_yet;
            case FaultWindow::Final: return placed_since_grasp;
            default: return true;
        }
    }

    void on_grasp() {
        grasped_yet = true;
        placed_since_grasp = false;
    }
    void on_place() { placed_since_grasp = true; }
};

/// Truncated-Gaussian sample. stddev 0 short-circuits to the mean without
/// consuming randomness; otherwise rejection sampling guarantees the result
/// lies in [lo, hi]. Symmetric mode flips the sign with one extra fair draw.
inline double sample_noise(const NoiseSpec& spec, Rng& rng) {
    double value = spec.mean;
    if (spec.stddev > 0.0) {
        int guard = 0;
        do {
            value = spec.mean + spec.stddev * rng.next_gauss();
            if (++guard > 1000000)
                throw std::runtime_error("noise truncation interval is unreachable");
        } while (value < spec.lo || value > spec.hi);
    }
    if (spec.symmetric && rng.next_bool()) value = -value;
    return value;
}

namespace detail {

inline double axis_value(const Vec3& v, ChannelId::Axis axis) {
    switch (axis) {
        case ChannelId::Axis::X: return v[0];
        case ChannelId::Axis::Y: return v[1];
        default: return v[2];
    }
}

inline const BoxState* nearest_box(const WorldState& w) {
    if (w.held) return w.find_box(*w.held);
    const BoxState* best = nullptr;
    double best_d2 = 0.0;
    for (const auto& b : w.boxes) {
        double d2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double d = b.position[i] - w.effector[i];
            d2 += d * d;
        }
        if (!best || d2 < best_d2) {
            best = &b;
            best_d2 = d2;
        }
    }
    return best;
}

}  // namespace detail

/// Ground-truth value of a numeric channel, before any fault.
inline double ground_truth(const WorldState& w, const ChannelId& ch) {
    switch (ch.kind) {
        case ChannelId::Kind::Robot:
            if (ch.axis == ChannelId::Axis::Angle) return w.heading;
            return detail::axis_value(w.effector, ch.axis);
        case ChannelId::Kind::Box: {
            const BoxState* box = w.find_box(ch.box_id);
            if (!box) throw UnknownChannel("no box with id " + std::to_string(ch.box_id));
            return detail::axis_value(box->position, ch.axis);
        }
        case ChannelId::Kind::Distance: {
            const BoxState* box = w.find_box(ch.box_id);
            if (!box) throw UnknownChannel("no box with id " + std::to_string(ch.box_id));
            // signed: box position minus effector position along the axis
            return detail::axis_value(box->position, ch.axis) -
                   detail::axis_value(w.effector, ch.axis);
        }
        default:
            throw UnknownChannel("channel 'color' is not numeric");
    }
}

/// Sensor read result: the color channel yields a string, everything else a
/// number.
using SensorValue = std::variant<double, std::string>;

/// Reads a channel through the fault layer. Faults matching the channel and
/// an active window apply in declaration order: negate flips the sign,
/// add-noise adds a sample drawn from `rng`. With no active faults the
/// ground truth is returned exactly.
inline SensorValue read_sensor(const WorldState& w, const ChannelId& ch,
                               const std::vector<SensorFault>& faults,
                               const WindowState& window, Rng& rng) {
    if (ch.kind == ChannelId::Kind::Color) {
        const BoxState* box = detail::nearest_box(w);
        if (!box) throw UnknownChannel("no box to observe on channel 'color'");
        return box->color;
    }
    double value = ground_truth(w, ch);
    for (const auto& fault : faults) {
        if (!(fault.channel == ch) || !window.active(fault.window)) continue;
        if (fault.kind == SensorFault::Kind::Negate)
            value = -value;
        else
            value += sample_noise(fault.noise, rng);
    }
    return value;
}

// --- JSON forms ----------------------------------------------------------

inline nlohmann::json fault_to_json(const SensorFault& f) {
    nlohmann::json j{{"channel", f.channel.text()},
                     {"kind", f.kind == SensorFault::Kind::Negate ? "negate" : "add-noise"},
                     {"window", window_text(f.window)}};
    if (f.kind == SensorFault::Kind::AddNoise) j["noise"] = noise_to_json(f.noise);
    return j;
}

inline SensorFault fault_from_json(const nlohmann::json& j) {
    SensorFault f;
    const auto channel = ChannelId::parse(j.at("channel").get<std::string>());
    if (!channel) throw std::runtime_error("bad fault channel");
    if (!channel->numeric()) throw std::runtime_error("faults apply to numeric channels");
    f.channel = *channel;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "negate") f.kind = SensorFault::Kind::Negate;
    else if (kind == "add-noise") f.kind = SensorFault::Kind::AddNoise;
    else throw std::runtime_error("bad fault kind '" + kind + "'");
    const auto window = window_from_text(j.at("window").get<std::string>());
    if (!window) throw std::runtime_error("bad fault window");
    f.window = *window;
    if (f.kind == SensorFault::Kind::AddNoise) f.noise = noise_from_json(j.at("noise"));
    return f;
}

namespace detail {

inline bool parse_double_text(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace detail

/// Parses the compact CLI form `kind:channel:window`, with optional noise
/// overrides `:mean=..,stddev=..,lo=..,hi=..,sign=..` for add-noise.
inline SensorFault fault_from_spec(const std::string& spec, const NoiseSpec& defaults) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 3) throw std::runtime_error("fault spec needs kind:channel:window");

    SensorFault f;
    if (parts[0] == "negate") f.kind = SensorFault::Kind::Negate;
    else if (parts[0] == "add-noise") f.kind = SensorFault::Kind::AddNoise;
    else throw std::runtime_error("bad fault kind '" + parts[0] + "'");
    const auto channel = ChannelId::parse(parts[1]);
    if (!channel || !channel->numeric())
        throw std::runtime_error("bad fault channel '" + parts[1] + "'");
    f.channel = *channel;
    const auto window = window_from_text(parts[2]);
    if (!window) throw std::runtime_error("bad fault window '" + parts[2] + "'");
    f.window = *window;
    f.noise = defaults;
    if (parts.size() > 3) {
        std::string key, val;
        bool in_val = false;
        auto apply = [&]() {
            if (key.empty()) return;
            if (key == "sign") {
                if (val != "positive" && val != "symmetric")
                    throw std::runtime_error("bad noise sign '" + val + "'");
                f.noise.symmetric = val == "symmetric";
            } else {
                double num = 0.0;
                if (!detail::parse_double_text(val, num))
                    throw std::runtime_error("bad noise parameter '" + key + "'");
                if (key == "mean") f.noise.mean = num;
                else if (key == "stddev") f.noise.stddev = num;
                else if (key == "lo") f.noise.lo = num;
                else if (key == "hi") f.noise.hi = num;
                else throw std::runtime_error("unknown noise parameter '" + key + "'");
            }
            key.clear();
            val.clear();
            in_val = false;
        };
        for (char c : parts[3]) {
            if (c == ',') apply();
            else if (c == '=' && !in_val) in_val = true;
            else (in_val ? val : key) += c;
        }
        apply();
        f.noise.validate();
    }
    return f;
}

}  // namespace robomut
