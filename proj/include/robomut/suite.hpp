#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "robomut/sensors.hpp"
#include "robomut/world.hpp"

namespace robomut {

class SuiteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Addressable piece of world state usable in assertions.
/// Scalar: robot.{x,y,z}, robot.heading, box.<id>.{x,y,z}, clock.
/// Vector: robot.position, box.<id>.position.
/// String: gripper, box.<id>.color, box.<id>.support.
struct StatePath {
    enum class Kind {
        RobotPosition,
        RobotAxis,
        RobotHeading,
        BoxPosition,
        BoxAxis,
        BoxColor,
        BoxSupport,
        Gripper,
        Clock,
    };

    Kind kind = Kind::RobotPosition;
    int box_id = 0;
    int axis = 0;  // 0..2 for RobotAxis/BoxAxis
    std::string text;

    bool is_vector() const { return kind == Kind::RobotPosition || kind == Kind::BoxPosition; }
    bool is_string() const {
        return kind == Kind::BoxColor || kind == Kind::BoxSupport || kind == Kind::Gripper;
    }

    /// True when every component maps to a sensor channel (so the path can
    /// be read through the fault layer).
    bool sensor_backed() const {
        switch (kind) {
            case Kind::RobotPosition:
            case Kind::RobotAxis:
            case Kind::RobotHeading:
            case Kind::BoxPosition:
            case Kind::BoxAxis:
                return true;
            default:
                return false;
        }
    }

    static StatePath parse(const std::string& s) {
        StatePath p;
        p.text = s;
        auto axis_index = [](const std::string& t) -> int {
            if (t == "x") return 0;
            if (t == "y") return 1;
            if (t == "z") return 2;
            return -1;
        };
        if (s == "gripper") {
            p.kind = Kind::Gripper;
            return p;
        }
        if (s == "clock") {
            p.kind = Kind::Clock;
            return p;
        }
        if (s == "robot.position") {
            p.kind = Kind::RobotPosition;
            return p;
        }
        if (s == "robot.heading") {
            p.kind = Kind::RobotHeading;
            return p;
        }
        if (s.rfind("robot.", 0) == 0) {
            const int a = axis_index(s.substr(6));
            if (a >= 0) {
                p.kind = Kind::RobotAxis;
                p.axis = a;
                return p;
            }
        }
        if (s.rfind("box.", 0) == 0) {
            const auto rest = s.substr(4);
            const auto dot = rest.find('.');
            if (dot != std::string::npos && dot > 0) {
                try {
                    p.box_id = std::stoi(rest.substr(0, dot));
                } catch (...) {
                    throw SuiteError("bad state path '" + s + "'");
                }
                const auto field = rest.substr(dot + 1);
                if (field == "position") p.kind = Kind::BoxPosition;
                else if (field == "color") p.kind = Kind::BoxColor;
                else if (field == "support") p.kind = Kind::BoxSupport;
                else if (axis_index(field) >= 0) {
                    p.kind = Kind::BoxAxis;
                    p.axis = axis_index(field);
                } else {
                    throw SuiteError("bad state path '" + s + "'");
                }
                return p;
            }
        }
        throw SuiteError("bad state path '" + s + "'");
    }
};

/// One assertion evaluated at a moment of the run:
///   within — |subject - target| <= tol per component (inclusive)
///   ge/le  — scalar bound (inclusive)
///   equals — exact match (numbers or strings)
struct TestCase {
    enum class When { Initial, Final, Always };
    enum class Op { Within, Ge, Le, Equals };

    std::string name;
    When when = When::Final;
    bool sensed = false;  // source: sensed reads go through the fault layer
    Op op = Op::Within;

    StatePath subject;
    std::optional<StatePath> target_path;  // within: path target
    std::vector<double> target_values;     // within: literal target (1 or 3)
    std::vector<double> tolerance;         // within: per-component epsilon
    double bound = 0.0;                    // ge / le
    std::variant<double, std::string> equals_value;  // equals
};

struct TestSuite {
    std::vector<TestCase> tests;
    int rounds = 1;
    std::uint64_t master_seed = 0;
};

namespace detail {

inline std::size_t path_arity(const StatePath& p) { return p.is_vector() ? 3 : 1; }

inline void check_test(const TestCase& t) {
    if (t.name.empty()) throw SuiteError("test without a name");
    if (t.sensed && !t.subject.sensor_backed())
        throw SuiteError("test '" + t.name + "': path '" + t.subject.text +
                         "' cannot be read through sensors");
    switch (t.op) {
        case TestCase::Op::Within: {
            if (t.subject.is_string())
                throw SuiteError("test '" + t.name + "': within needs a numeric subject");
            const std::size_t n = path_arity(t.subject);
            if (t.target_path) {
                if (path_arity(*t.target_path) != n || t.target_path->is_string())
                    throw SuiteError("test '" + t.name + "': target arity mismatch");
            } else if (t.target_values.size() != n) {
                throw SuiteError("test '" + t.name + "': target needs " +
                                 std::to_string(n) + " component(s)");
            }
            if (t.tolerance.size() != n)
                throw SuiteError("test '" + t.name + "': tolerance needs " +
                                 std::to_string(n) + " component(s)");
            for (double e : t.tolerance)
                if (e < 0.0) throw SuiteError("test '" + t.name + "': negative tolerance");
            break;
        }
        case TestCase::Op::Ge:
        case TestCase::Op::Le:
            if (t.subject.is_string() || t.subject.is_vector())
                throw SuiteError("test '" + t.name + "': bound needs a scalar subject");
            break;
        case TestCase::Op::Equals:
            if (t.subject.is_string() !=
                std::holds_alternative<std::string>(t.equals_value))
                throw SuiteError("test '" + t.name + "': equals value kind mismatch");
            if (t.subject.is_vector())
                throw SuiteError("test '" + t.name + "': equals needs a scalar subject");
            break;
    }
}

}  // namespace detail

inline void validate_suite(const TestSuite& suite) {
    if (suite.rounds < 1) throw SuiteError("rounds must be >= 1");
    std::set<std::string> names;
    for (const auto& t : suite.tests) {
        detail::check_test(t);
        if (!names.insert(t.name).second)
            throw SuiteError("duplicate test name '" + t.name + "'");
    }
}

inline TestSuite suite_from_json(const nlohmann::json& j) {
    try {
        TestSuite suite;
        suite.rounds = j.value("rounds", 1);
        suite.master_seed = j.value("master_seed", 0ull);
        for (const auto& tj : j.value("tests", nlohmann::json::array())) {
            TestCase t;
            t.name = tj.at("name").get<std::string>();
            const std::string when = tj.value("when", "final");
            if (when == "initial") t.when = TestCase::When::Initial;
            else if (when == "final") t.when = TestCase::When::Final;
            else if (when == "always") t.when = TestCase::When::Always;
            else throw SuiteError("test '" + t.name + "': bad when '" + when + "'");
            const std::string source = tj.value("source", "true");
            if (source == "sensed") t.sensed = true;
            else if (source == "true") t.sensed = false;
            else throw SuiteError("test '" + t.name + "': bad source '" + source + "'");

            const auto& assert_j = tj.at("assert");
            if (assert_j.contains("within")) {
                t.op = TestCase::Op::Within;
                const auto& w = assert_j.at("within");
                t.subject = StatePath::parse(w.at("subject").get<std::string>());
                const auto& target = w.at("target");
                if (target.is_string()) {
                    t.target_path = StatePath::parse(target.get<std::string>());
                } else if (target.is_array()) {
                    for (const auto& v : target) t.target_values.push_back(v.get<double>());
                } else {
                    t.target_values.push_back(target.get<double>());
                }
                const auto& tol = w.at("tol");
                if (tol.is_array())
                    for (const auto& v : tol) t.tolerance.push_back(v.get<double>());
                else
                    t.tolerance.push_back(tol.get<double>());
            } else if (assert_j.contains("ge") || assert_j.contains("le")) {
                const bool ge = assert_j.contains("ge");
                t.op = ge ? TestCase::Op::Ge : TestCase::Op::Le;
                const auto& b = assert_j.at(ge ? "ge" : "le");
                t.subject = StatePath::parse(b.at("subject").get<std::string>());
                t.bound = b.at("bound").get<double>();
            } else if (assert_j.contains("equals")) {
                t.op = TestCase::Op::Equals;
                const auto& e = assert_j.at("equals");
                t.subject = StatePath::parse(e.at("subject").get<std::string>());
                const auto& value = e.at("value");
                if (value.is_string()) t.equals_value = value.get<std::string>();
                else t.equals_value = value.get<double>();
            } else {
                throw SuiteError("test '" + t.name + "' has no within/ge/le/equals assertion");
            }
            suite.tests.push_back(std::move(t));
        }
        validate_suite(suite);
        return suite;
    } catch (const nlohmann::json::exception& e) {
        throw SuiteError(std::string("malformed suite: ") + e.what());
    }
}

// --- path evaluation ---------------------------------------------------------

/// Reads a path's numeric components, either ground truth or sensed through
/// the fault layer.
inline std::vector<double> read_numeric_path(const StatePath& path, const WorldState& w,
                                             bool sensed,
                                             const std::vector<SensorFault>& faults,
                                             const WindowState& window, Rng& rng) {
    auto read_channel = [&](ChannelId ch) {
        if (!sensed) return ground_truth(w, ch);
        return std::get<double>(read_sensor(w, ch, faults, window, rng));
    };
    auto axis_of = [](int a) {
        return a == 0 ? ChannelId::Axis::X : a == 1 ? ChannelId::Axis::Y : ChannelId::Axis::Z;
    };
    switch (path.kind) {
        case StatePath::Kind::RobotPosition: {
            std::vector<double> out;
            for (int a = 0; a < 3; ++a)
                out.push_back(read_channel({ChannelId::Kind::Robot, axis_of(a), 0}));
            return out;
        }
        case StatePath::Kind::RobotAxis:
            return {read_channel({ChannelId::Kind::Robot, axis_of(path.axis), 0})};
        case StatePath::Kind::RobotHeading:
            return {read_channel({ChannelId::Kind::Robot, ChannelId::Axis::Angle, 0})};
        case StatePath::Kind::BoxPosition: {
            std::vector<double> out;
            for (int a = 0; a < 3; ++a)
                out.push_back(read_channel({ChannelId::Kind::Box, axis_of(a), path.box_id}));
            return out;
        }
        case StatePath::Kind::BoxAxis:
            return {read_channel({ChannelId::Kind::Box, axis_of(path.axis), path.box_id})};
        case StatePath::Kind::Clock:
            return {w.clock};
        default:
            throw SuiteError("path '" + path.text + "' is not numeric");
    }
}

inline std::string read_string_path(const StatePath& path, const WorldState& w) {
    switch (path.kind) {
        case StatePath::Kind::Gripper:
            return w.gripper_open ? "open" : "closed";
        case StatePath::Kind::BoxColor:
        case StatePath::Kind::BoxSupport: {
            const BoxState* box = w.find_box(path.box_id);
            if (!box)
                throw SuiteError("no box with id " + std::to_string(path.box_id));
            return path.kind == StatePath::Kind::BoxColor ? box->color : box->supported_on;
        }
        default:
            throw SuiteError("path '" + path.text + "' is not a string");
    }
}

/// Evaluates one assertion against one world snapshot. `rng` feeds noise
/// faults on sensed reads; each test owns an independent stream.
inline bool evaluate_assertion(const TestCase& t, const WorldState& w,
                               const std::vector<SensorFault>& faults,
                               const WindowState& window, Rng& rng) {
    switch (t.op) {
        case TestCase::Op::Within: {
            const auto subject =
                read_numeric_path(t.subject, w, t.sensed, faults, window, rng);
            std::vector<double> target;
            if (t.target_path) {
                // path targets are ground truth; only the subject is sensed
                Rng unused(0);
                target = read_numeric_path(*t.target_path, w, false, faults, window, unused);
            } else {
                target = t.target_values;
            }
            for (std::size_t i = 0; i < subject.size(); ++i)
                if (std::abs(subject[i] - target[i]) > t.tolerance[i]) return false;
            return true;
        }
        case TestCase::Op::Ge:
        case TestCase::Op::Le: {
            const double v =
                read_numeric_path(t.subject, w, t.sensed, faults, window, rng)[0];
            return t.op == TestCase::Op::Ge ? v >= t.bound : v <= t.bound;
        }
        case TestCase::Op::Equals: {
            if (t.subject.is_string())
                return read_string_path(t.subject, w) == std::get<std::string>(t.equals_value);
            const double v =
                read_numeric_path(t.subject, w, t.sensed, faults, window, rng)[0];
            return v == std::get<double>(t.equals_value);
        }
    }
    return false;
}

}  // namespace robomut
