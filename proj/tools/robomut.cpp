// robomut - mutation testing for robot command programs.
//
// Subcommands: parse, mutate, run, score, sim. All randomness flows from the
// single --seed value; reports are byte-reproducible.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "robomut/catalog.hpp"
#include "robomut/harness.hpp"
#include "robomut/parse.hpp"
#include "robomut/report.hpp"
#include "robomut/scenario.hpp"
#include "robomut/sim.hpp"
#include "robomut/suite.hpp"
#include "robomut/unparse.hpp"
#include "robomut/validate.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitGate = 3;
constexpr int kExitIo = 4;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

nlohmann::json parse_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

robomut::Program load_program(const std::string& path, bool must_validate) {
    const std::string source = read_file(path);
    robomut::Program program;
    try {
        program = robomut::parse_program(source);
    } catch (const robomut::ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
    if (must_validate) {
        const auto violations = robomut::validate_program(program);
        if (!violations.empty()) {
            std::string message = path + " fails validation:";
            for (const auto& v : violations)
                message += "\n  " + v.site.text() + ": " + v.message;
            throw InputError(message);
        }
    }
    return program;
}

std::string json_bytes(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_parse(const std::string& program_path) {
    const robomut::Program program = load_program(program_path, false);
    const auto violations = robomut::validate_program(program);
    std::cout << robomut::unparse_program(program);
    if (!violations.empty()) {
        for (const auto& v : violations)
            std::cerr << program_path << ": " << v.site.text() << ": " << v.message << "\n";
        return kExitInput;
    }
    return 0;
}

int cmd_mutate(const std::string& program_path, const std::string& scenario_path,
               const std::string& preset, const std::string& out_path) {
    const robomut::Program program = load_program(program_path, true);
    const robomut::ScenarioSpec scenario =
        robomut::scenario_from_json(parse_json_file(scenario_path));
    const robomut::MutantCatalog catalog =
        robomut::generate_catalog(program, scenario, preset);
    write_file(out_path, json_bytes(robomut::catalog_to_json(catalog)));
    std::cout << "wrote " << catalog.mutants.size() << " mutants to " << out_path << "\n";
    return 0;
}

int cmd_run(const std::string& program_path, const std::string& scenario_path,
            const std::string& suite_path, const std::string& mutants_path,
            int rounds_flag, bool rounds_set, std::uint64_t seed_flag, bool seed_set,
            const std::string& report_path, int parallel, bool include_infeasible,
            bool include_invalid) {
    const std::string program_bytes = read_file(program_path);
    const std::string scenario_bytes = read_file(scenario_path);
    const std::string suite_bytes = read_file(suite_path);
    const std::string mutants_bytes = read_file(mutants_path);

    const robomut::Program program = load_program(program_path, true);
    const robomut::ScenarioSpec scenario =
        robomut::scenario_from_json(parse_json_file(scenario_path));
    const robomut::TestSuite suite = robomut::suite_from_json(parse_json_file(suite_path));
    robomut::MutantCatalog catalog;
    try {
        catalog = robomut::catalog_from_json(parse_json_file(mutants_path), program);
    } catch (const robomut::ParseError& e) {
        throw InputError(mutants_path + ": " + e.what());
    }
    if (catalog.original_hash != robomut::program_hash(program))
        throw InputError("catalog '" + mutants_path + "' was generated from a different program");

    robomut::ExperimentOptions options;
    options.rounds = rounds_set ? rounds_flag : suite.rounds;
    options.master_seed = seed_set ? seed_flag : suite.master_seed;
    options.parallel = parallel;
    options.include_infeasible = include_infeasible;
    options.include_invalid = include_invalid;

    const robomut::ExperimentResult result =
        robomut::run_experiment(program, scenario, catalog, suite, options);

    robomut::ReportInputs inputs;
    inputs.program_hash = robomut::bytes_hash(program_bytes);
    inputs.scenario_hash = robomut::bytes_hash(scenario_bytes);
    inputs.suite_hash = robomut::bytes_hash(suite_bytes);
    inputs.mutants_hash = robomut::bytes_hash(mutants_bytes);

    const auto report = robomut::report_to_json(result, catalog, suite, inputs, options);
    write_file(report_path, json_bytes(report));

    if (catalog.mutants.empty())
        std::cerr << "warning: the catalog contains no mutants; score is n/a\n";
    std::cout << robomut::render_score_table(report);
    std::cout << "report written to " << report_path << "\n";
    return 0;
}

int cmd_score(const std::string& report_path) {
    const nlohmann::json report = parse_json_file(report_path);
    if (!report.contains("scores") || !report.at("scores").contains("per_round"))
        throw InputError("'" + report_path + "' does not look like a run report");
    std::cout << robomut::render_score_table(report);
    const auto& equivalents = report.at("scores").value("probable_equivalents",
                                                        nlohmann::json::array());
    if (!equivalents.empty()) {
        std::cout << "probable equivalents:";
        for (const auto& id : equivalents) std::cout << " " << id;
        std::cout << "\n";
    }
    return 0;
}

int cmd_sim(const std::string& program_path, const std::string& scenario_path,
            std::uint64_t seed, bool trace_flag,
            const std::vector<std::string>& fault_specs) {
    const robomut::Program program = load_program(program_path, true);
    const robomut::ScenarioSpec scenario =
        robomut::scenario_from_json(parse_json_file(scenario_path));
    std::vector<robomut::SensorFault> faults;
    for (const auto& spec : fault_specs) {
        try {
            faults.push_back(robomut::fault_from_spec(spec, scenario.noise_default));
        } catch (const std::exception& e) {
            throw InputError(std::string("bad --fault value: ") + e.what());
        }
    }

    const robomut::RunSeeds seeds{robomut::derive_seed(seed, 0, 0),
                                  robomut::derive_seed(seed, 0, 1)};
    const robomut::Trace trace = robomut::run_program(program, scenario, faults, seeds);

    if (trace_flag) {
        for (const auto& step : trace.steps) {
            std::printf("%-12s %-24s effector %s %s %s\n", step.site.text().c_str(),
                        step.resolved.c_str(),
                        robomut::format_number(step.after.effector[0]).c_str(),
                        robomut::format_number(step.after.effector[1]).c_str(),
                        robomut::format_number(step.after.effector[2]).c_str());
        }
    }
    const auto& final_state = trace.final_state();
    std::cout << "status: " << robomut::Trace::status_text(trace.status) << "\n";
    if (trace.status != robomut::Trace::Status::Completed)
        std::cout << "aborted at command " << trace.abort_command_index() << ": "
                  << trace.abort_reason << "\n";
    std::cout << "effector: " << robomut::format_number(final_state.effector[0]) << " "
              << robomut::format_number(final_state.effector[1]) << " "
              << robomut::format_number(final_state.effector[2])
              << "  heading: " << robomut::format_number(final_state.heading)
              << "  gripper: " << (final_state.gripper_open ? "open" : "closed") << "\n";
    for (const auto& box : final_state.boxes)
        std::cout << "box " << box.id << " (" << box.color << "): "
                  << robomut::format_number(box.position[0]) << " "
                  << robomut::format_number(box.position[1]) << " "
                  << robomut::format_number(box.position[2]) << " on " << box.supported_on
                  << "\n";
    for (const auto& event : final_state.events)
        std::cout << "event: " << robomut::Event::kind_text(event.kind) << " at command "
                  << event.step << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutation testing for robot command programs"};
    app.require_subcommand(1);

    std::string program_path, scenario_path, suite_path, mutants_path, out_path, report_path;
    std::string preset;
    int rounds = 5;
    std::uint64_t seed = 0;
    int parallel = 1;
    bool include_infeasible = false, include_invalid = false, trace_flag = false;
    std::vector<std::string> fault_specs;

    auto* parse_cmd = app.add_subcommand("parse", "parse and validate a program");
    parse_cmd->add_option("program", program_path, "program file (.rbt)")->required();

    auto* mutate_cmd = app.add_subcommand("mutate", "generate a mutant catalog");
    mutate_cmd->add_option("program", program_path, "program file (.rbt)")->required();
    mutate_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
    mutate_cmd->add_option("--ops", preset, "preset: table3|domain-all|classical|naive-string")
        ->required()
        ->check(CLI::IsMember({"table3", "domain-all", "classical", "naive-string"}));
    mutate_cmd->add_option("--out", out_path, "catalog output path")->required();

    auto* run_cmd = app.add_subcommand("run", "run a suite against every mutant");
    run_cmd->add_option("program", program_path, "program file (.rbt)")->required();
    run_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
    run_cmd->add_option("--suite", suite_path, "test suite JSON")->required();
    run_cmd->add_option("--mutants", mutants_path, "mutant catalog JSON")->required();
    auto* rounds_opt = run_cmd->add_option("--rounds", rounds, "rounds (default: suite value)");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed (default: suite value)");
    run_cmd->add_option("--report", report_path, "report output path")->required();
    run_cmd->add_option("--parallel", parallel, "concurrent mutant executions")
        ->check(CLI::PositiveNumber);
    run_cmd->add_flag("--include-infeasible", include_infeasible,
                      "count infeasible mutants in the score denominator");
    run_cmd->add_flag("--include-invalid", include_invalid,
                      "count invalid mutants in the score denominator");

    auto* score_cmd = app.add_subcommand("score", "render the score table of a report");
    score_cmd->add_option("report", report_path, "report JSON")->required();

    auto* sim_cmd = app.add_subcommand("sim", "execute one program in the simulator");
    sim_cmd->add_option("program", program_path, "program file (.rbt)")->required();
    sim_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
    sim_cmd->add_option("--seed", seed, "seed for jitter and noise");
    sim_cmd->add_flag("--trace", trace_flag, "print one line per executed command");
    sim_cmd->add_option("--fault", fault_specs,
                        "sensor fault kind:channel:window[:k=v,...]; repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (parse_cmd->parsed()) return cmd_parse(program_path);
        if (mutate_cmd->parsed())
            return cmd_mutate(program_path, scenario_path, preset, out_path);
        if (run_cmd->parsed())
            return cmd_run(program_path, scenario_path, suite_path, mutants_path, rounds,
                           rounds_opt->count() > 0, seed, seed_opt->count() > 0, report_path,
                           parallel, include_infeasible, include_invalid);
        if (score_cmd->parsed()) return cmd_score(report_path);
        if (sim_cmd->parsed())
            return cmd_sim(program_path, scenario_path, seed, trace_flag, fault_specs);
    } catch (const robomut::HarnessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGate;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        // parse/validation problems with any input
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
