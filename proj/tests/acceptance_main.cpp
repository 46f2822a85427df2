// Acceptance suite: one pass/fail line per criterion. Criteria that concern
// the command-line contract drive the installed binary; the rest exercise
// the library directly. Non-zero exit when anything fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "robomut/catalog.hpp"
#include "robomut/harness.hpp"
#include "robomut/parse.hpp"
#include "robomut/report.hpp"

#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace robomut;

namespace {

std::string g_robomut;
fs::path g_work;
int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << " (" << name
              << "): " << detail << "\n";
    if (!ok) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = g_robomut + " " + args + " > " +
                            (g_work / "stdout.txt").string() + " 2> " +
                            (g_work / "stderr.txt").string();
    return std::system(cmd.c_str());
}

std::string data(const std::string& name) { return testutil::data_path(name); }

// --- criterion 1: catalog reproduction --------------------------------------

void criterion_1() {
    const std::string out = (g_work / "catalog.json").string();
    Timer timer;
    const int rc = run_cli("mutate " + data("reference.rbt") + " --scenario " +
                           data("reference_scenario.json") + " --ops table3 --out " + out);
    const double elapsed = timer.seconds();
    if (rc != 0) {
        report(1, "catalog reproduction", false, "mutate exited with " + std::to_string(rc));
        return;
    }
    const auto catalog = nlohmann::json::parse(testutil::slurp(out));
    const auto& mutants = catalog.at("mutants");

    // the reference table, row for row: category + description template
    const std::vector<std::pair<std::string, std::string>> expected = {
        {"Translation", "Change the y-value in translation"},
        {"Rotation", "Change the angle orientation in rotation"},
        {"Translation", "Change the z-value in translation"},
        {"Gripper Operation", "Do not change gripper status"},
        {"Gripper Operation", "Change gripper status twice"},
        {"Gripper Operation", "Change gripper status with the opposite expected operation"},
        {"Rotation", "Change angle orientation in rotation"},
        {"Translation", "Change x-value in translation"},
        {"Robot Initial Position", "Sensor reading with opposite expected value for x-component"},
        {"Robot Initial Position", "Sensor reading with opposite expected value for y-component"},
        {"Robot Initial Position", "Sensor reading with opposite expected value for z-component"},
        {"Robot Initial Position", "Sensor reading with noise in x-component"},
        {"Robot Initial Position", "Sensor reading with noise in y-component"},
        {"Robot Initial Position", "Sensor reading with noise in z-component"},
        {"Box Initial Position", "Sensor reading with opposite expected value for x-component"},
        {"Box Initial Position", "Sensor reading with opposite expected value for y-component"},
        {"Box Initial Position", "Sensor reading with opposite expected value for z-component"},
        {"Box Initial Position", "Sensor reading with noise in x-component"},
        {"Box Initial Position", "Sensor reading with noise in y-component"},
        {"Box Initial Position", "Sensor reading with noise in z-component"},
        {"Box Final Position", "Sensor reading with opposite expected value for x-component"},
        {"Box Final Position", "Sensor reading with opposite expected value for y-component"},
        {"Box Final Position", "Sensor reading with opposite expected value for z-component"},
        {"Box Final Position", "Sensor reading with noise in x-component"},
        {"Box Final Position", "Sensor reading with noise in y-component"},
        {"Box Final Position", "Sensor reading with noise in z-component"},
    };

    auto category_of = [](const nlohmann::json& m) -> std::string {
        const std::string kind = m.at("kind").get<std::string>();
        if (kind == "TranslationSignFlip") return "Translation";
        if (kind == "RotationFlip") return "Rotation";
        if (kind == "CommandDelete" || kind == "CommandDuplicate" ||
            kind == "GripperOpposite")
            return "Gripper Operation";
        const auto& fault = m.at("fault");
        const std::string channel = fault.at("channel").get<std::string>();
        const std::string window = fault.at("window").get<std::string>();
        std::string where = channel.rfind("robot.", 0) == 0 ? "Robot" : "Box";
        std::string when = window == "initial" ? "Initial" : "Final";
        return where + " " + when + " Position";
    };

    bool ok = mutants.size() == 26;
    std::string detail;
    std::map<std::string, int> counts;
    for (std::size_t i = 0; ok && i < mutants.size(); ++i) {
        const auto& m = mutants[i];
        const std::string category = category_of(m);
        ++counts[category];
        if (m.at("id").get<int>() != static_cast<int>(i) + 1 ||
            category != expected[i].first ||
            m.at("description").get<std::string>() != expected[i].second) {
            ok = false;
            detail = "row " + std::to_string(i + 1) + " mismatches the reference table";
        }
    }
    if (ok) {
        ok = counts["Translation"] == 3 && counts["Rotation"] == 2 &&
             counts["Gripper Operation"] == 3 && counts["Robot Initial Position"] == 6 &&
             counts["Box Initial Position"] == 6 && counts["Box Final Position"] == 6;
        if (!ok) detail = "category counts off";
    }
    if (ok && elapsed >= 1.0) {
        ok = false;
        detail = "took " + std::to_string(elapsed) + "s";
    }
    if (ok)
        detail = "26 mutants, categories 3/2/3/6/6/6, rows match, " +
                 std::to_string(elapsed) + "s";
    report(1, "catalog reproduction", ok, detail);
}

// --- criterion 2: score band -------------------------------------------------

void criterion_2() {
    const std::string catalog = (g_work / "catalog.json").string();
    const std::string rep = (g_work / "report.json").string();
    Timer timer;
    const int rc = run_cli("run " + data("reference.rbt") + " --scenario " +
                           data("reference_scenario.json") + " --suite " +
                           data("reference_suite.json") + " --mutants " + catalog +
                           " --rounds 5 --seed 42 --report " + rep);
    const double elapsed = timer.seconds();
    if (rc != 0) {
        report(2, "score band", false, "run exited with " + std::to_string(rc));
        return;
    }
    const auto parsed = nlohmann::json::parse(testutil::slurp(rep));
    const auto& rounds = parsed.at("scores").at("per_round");
    bool ok = rounds.size() == 5;
    std::string scores;
    for (const auto& r : rounds) {
        const double score = r.at("score").get<double>();
        scores += (scores.empty() ? "" : ", ") + format_percent(score);
        // band [0.77, 0.92] on exact counts, so the comparison is rational
        const long long killed = r.at("killed").get<long long>();
        const long long survived = r.at("survived").get<long long>();
        const long long denom = killed + survived;
        if (!(killed * 100 >= 77 * denom && killed * 100 <= 92 * denom)) ok = false;
    }
    if (ok && elapsed >= 60.0) {
        ok = false;
        scores = "took " + std::to_string(elapsed) + "s";
    }
    report(2, "score band", ok,
           "five round scores [" + scores + "] within [77%, 92%], " +
               std::to_string(elapsed) + "s");
}

// --- criterion 3: determinism --------------------------------------------------

void criterion_3() {
    const std::string catalog = (g_work / "catalog.json").string();
    const auto run_to = [&](const std::string& name, const std::string& extra) {
        const std::string path = (g_work / name).string();
        const int rc = run_cli("run " + data("reference.rbt") + " --scenario " +
                               data("reference_scenario.json") + " --suite " +
                               data("reference_suite.json") + " --mutants " + catalog +
                               " --rounds 5 --seed 42 --report " + path + extra);
        return rc == 0 ? testutil::slurp(path) : std::string();
    };
    const std::string first = run_to("rep_a.json", "");
    const std::string second = run_to("rep_b.json", "");
    const std::string parallel1 = run_to("rep_p1.json", " --parallel 1");
    const std::string parallel8 = run_to("rep_p8.json", " --parallel 8");
    const bool repeat_ok = !first.empty() && first == second;
    const bool parallel_ok = !parallel1.empty() && parallel1 == parallel8 &&
                             parallel1 == first;
    report(3, "determinism", repeat_ok && parallel_ok,
           std::string("repeat run byte-identical: ") + (repeat_ok ? "yes" : "no") +
               ", parallel 8 == parallel 1: " + (parallel_ok ? "yes" : "no"));
}

// --- criterion 4: taxonomy cases ----------------------------------------------

void criterion_4() {
    const Program original = testutil::load_program("reference.rbt");
    const auto scenario = testutil::load_scenario();
    const TestSuite suite = suite_from_json(
        nlohmann::json::parse(testutil::slurp(data("reference_suite.json"))));

    ExperimentOptions one_round;
    one_round.rounds = 1;
    one_round.master_seed = 42;

    // (a) naive edits that leave the verb vocabulary always classify invalid
    {
        const MutantCatalog naive = generate_catalog(original, scenario, "naive-string");
        const ExperimentResult result =
            run_experiment(original, scenario, naive, suite, one_round);
        int escaped = 0, invalid = 0;
        for (std::size_t i = 0; i < naive.mutants.size(); ++i) {
            bool escapes = false;
            for_each_statement(*naive.mutants[i].program,
                               [&](const Statement& s, const std::vector<int>&) {
                                   if (const auto* cmd = s.as_command())
                                       if (!verb_kind(cmd->verb)) escapes = true;
                               });
            if (!escapes) continue;
            ++escaped;
            if (result.rounds[0].mutants[i].classification == Classification::Invalid)
                ++invalid;
        }
        report(4, "naive edits invalid", escaped > 0 && escaped == invalid,
               std::to_string(invalid) + "/" + std::to_string(escaped) +
                   " vocabulary-escaping mutants invalid");
    }

    // (b) the one-degree rotation perturbation survives the 0.02 tolerance
    {
        MutationOperator perturb{MutationOperator::Kind::RotationPerturb};
        perturb.perturb_degrees = 1.0;
        const auto turns = enumerate_sites(original, SiteFilter::AbsoluteTurnCommands);
        auto mutant = apply_operator(original, perturb, turns[0]);
        bool ok = mutant.has_value();
        std::string detail = "could not build the fixture";
        if (ok) {
            mutant->id = 1;
            mutant->description = "rotation perturbed by one degree";
            MutantCatalog catalog;
            catalog.preset = "fixture";
            catalog.original = original;
            catalog.original_hash = program_hash(original);
            catalog.mutants.push_back(*mutant);
            ExperimentOptions five;
            five.rounds = 5;
            five.master_seed = 42;
            const ExperimentResult result =
                run_experiment(original, scenario, catalog, suite, five);
            int survived = 0;
            for (const auto& round : result.rounds)
                if (round.mutants[0].classification == Classification::Survived) ++survived;
            ok = survived == 5;
            detail = "turn/90 -> turn/91 survived " + std::to_string(survived) + "/5 rounds";
        }
        report(4, "one-degree rotation survives", ok, detail);
    }

    // (c) a lift delta beyond the workspace ceiling classifies infeasible
    {
        MutationOperator digit{MutationOperator::Kind::NaiveCharEdit};
        digit.char_pos = 7;  // "lift/0.1" -> "lift/0.5"; top of workspace is z = 0.5
        digit.char_delete = false;
        digit.char_replacement = '5';
        const auto lifts = enumerate_sites(original, SiteFilter::TranslationCommands);
        auto mutant = apply_operator(original, digit, lifts[2]);
        bool ok = mutant.has_value();
        std::string detail = "could not build the fixture";
        if (ok) {
            mutant->id = 1;
            mutant->description = "lift beyond the workspace ceiling";
            MutantCatalog catalog;
            catalog.preset = "fixture";
            catalog.original = original;
            catalog.original_hash = program_hash(original);
            catalog.mutants.push_back(*mutant);
            const ExperimentResult result =
                run_experiment(original, scenario, catalog, suite, one_round);
            ok = result.rounds[0].mutants[0].classification == Classification::Infeasible;
            detail = std::string("lift/0.5 from z=0.05 under zmax 0.5 classified ") +
                     classification_text(result.rounds[0].mutants[0].classification);
        }
        report(4, "operational range infeasible", ok, detail);
    }
}

// --- criterion 5: simulator vs straight-line oracle -----------------------------

void criterion_5() {
    auto scenario = testutil::load_scenario();
    scenario.randomize.clear();
    std::mt19937_64 engine(20250811);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
    };

    int mismatches = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        const int n = 1 + static_cast<int>(engine() % 10);
        Program p;
        Vec3 expected = scenario.robot_position;
        int oracle_abort = 0;
        for (int i = 0; i < n; ++i) {
            const double delta = uniform(-0.15, 0.15);
            Command cmd;
            int axis = 2;
            switch (engine() % 3) {
                case 0:
                    cmd.verb = "move";
                    axis = static_cast<int>(engine() % 3);
                    cmd.args.emplace_back(std::string(1, "xyz"[axis]));
                    cmd.args.emplace_back(delta);
                    break;
                case 1:
                    cmd.verb = "lift";
                    cmd.args.emplace_back(delta);
                    break;
                default:
                    cmd.verb = "drop";
                    cmd.args.emplace_back(delta);
                    break;
            }
            p.statements.push_back(Statement{cmd});
            if (oracle_abort == 0) {
                Vec3 next = expected;
                next[axis] += cmd.verb == "drop" ? -delta : delta;
                bool feasible = next[2] >= 0.0;
                for (int a = 0; a < 3; ++a)
                    feasible = feasible && next[a] >= scenario.workspace_min[a] &&
                               next[a] <= scenario.workspace_max[a];
                if (!feasible) oracle_abort = i + 1;
                else expected = next;
            }
        }
        const Trace trace = run_program(p, scenario, {}, RunSeeds{1, 1});
        const bool same_pose = trace.final_state().effector == expected;
        const bool same_abort =
            oracle_abort == 0
                ? trace.status == Trace::Status::Completed
                : (trace.status == Trace::Status::Infeasible &&
                   trace.abort_command_index() == oracle_abort);
        if (!same_pose || !same_abort) ++mismatches;
    }
    report(5, "straight-line oracle", mismatches == 0,
           std::to_string(1000 - mismatches) +
               "/1000 programs match the component-sum oracle exactly");
}

// --- criterion 6: noise model ----------------------------------------------------

void criterion_6() {
    const auto scenario = testutil::load_scenario();
    const NoiseSpec spec = scenario.noise_default;
    Rng rng(42);
    double sum = 0.0;
    int in_band = 0;
    constexpr int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double v = sample_noise(spec, rng);
        if (v >= 0.053 && v <= 0.39) ++in_band;
        sum += v;
    }
    const double mean = sum / n;
    const bool ok = in_band == n && std::abs(mean - 0.2215) < 0.01;
    std::ostringstream detail;
    detail << in_band << "/" << n << " samples in [0.053, 0.39], mean " << mean;
    report(6, "noise model", ok, detail.str());
}

// --- criterion 7: operator algebra ------------------------------------------------

void criterion_7() {
    const auto scenario = testutil::load_scenario();
    int involution_checked = 0, involution_failed = 0;
    int first_order_checked = 0, first_order_failed = 0;

    for (std::uint64_t seed = 5000; seed < 5060; ++seed) {
        testutil::ProgramGen gen(seed);
        const Program p = gen.program();

        for (const auto kind : {MutationOperator::Kind::RotationFlip,
                                MutationOperator::Kind::TranslationSignFlip,
                                MutationOperator::Kind::GripperOpposite}) {
            const MutationOperator op{kind};
            for (const SiteId& site : enumerate_sites(p, SiteFilter::Commands)) {
                const auto once = apply_operator(p, op, site);
                if (!once) continue;
                const auto twice = apply_operator(*once->program, op, site);
                ++involution_checked;
                if (!twice || !(*twice->program == p)) ++involution_failed;
            }
        }
        for (const char* preset : {"domain-all", "classical", "naive-string"}) {
            for (const Mutant& m : generate_catalog(p, scenario, preset).mutants) {
                ++first_order_checked;
                if (!testutil::first_order(p, *m.program)) ++first_order_failed;
            }
        }
    }

    // sensor negation is an involution at the reading level
    WorldState w;
    w.boxes.push_back({0, "red", {0.1, 0.6, 0.02}, "floor"});
    SensorFault negate;
    negate.channel = *ChannelId::parse("box.0.x");
    negate.kind = SensorFault::Kind::Negate;
    negate.window = FaultWindow::WholeRun;
    WindowState window;
    Rng rng(1);
    const double fault_free =
        std::get<double>(read_sensor(w, negate.channel, {}, window, rng));
    const double doubled = std::get<double>(
        read_sensor(w, negate.channel, {negate, negate}, window, rng));
    const bool sensor_ok = fault_free == doubled;

    const bool ok = involution_failed == 0 && first_order_failed == 0 && sensor_ok &&
                    involution_checked > 100 && first_order_checked > 1000;
    report(7, "operator algebra", ok,
           std::to_string(involution_checked) + " involutions, " +
               std::to_string(first_order_checked) +
               " preset mutants single-site, sensor negation doubles to identity");
}

// --- criterion 8: score arithmetic -------------------------------------------------

void criterion_8() {
    bool ok = true;
    std::string detail;

    const auto base = score_round(1, 0, 18, 5, 2, 1, false, false);
    ok = ok && base.has_score && base.score == 18.0 / 23.0;
    const auto with_infeasible = score_round(1, 0, 18, 5, 2, 1, false, true);
    ok = ok && with_infeasible.score == 18.0 / 24.0;
    const auto with_invalid = score_round(1, 0, 18, 5, 2, 1, true, false);
    ok = ok && with_invalid.score == 18.0 / 25.0;
    const auto with_both = score_round(1, 0, 18, 5, 2, 1, true, true);
    ok = ok && with_both.score == 18.0 / 26.0;
    if (!ok) detail = "denominator policy broken";

    // the published five-round table: 92/85/92/88/88 with mean 89
    if (ok) {
        nlohmann::json per_round = nlohmann::json::array();
        const int killed[] = {23, 17, 23, 22, 22};
        const int considered[] = {25, 20, 25, 25, 25};
        for (int i = 0; i < 5; ++i) {
            const auto s = score_round(i + 1, 0, killed[i], considered[i] - killed[i], 0, 0,
                                       false, false);
            per_round.push_back({{"round", s.round},
                                 {"seed", 0},
                                 {"killed", s.killed},
                                 {"survived", s.survived},
                                 {"invalid", 0},
                                 {"infeasible", 0},
                                 {"score", s.score}});
        }
        const nlohmann::json report_json{{"scores", {{"per_round", per_round}}}};
        const std::string table = render_score_table(report_json);
        const std::string want =
            "Round  Score\n"
            "#1     92%\n"
            "#2     85%\n"
            "#3     92%\n"
            "#4     88%\n"
            "#5     88%\n"
            "Mean   89%\n";
        ok = table == want;
        detail = ok ? "ratios exact under all flags; table renders 92/85/92/88/88 mean 89%"
                    : "rendered table differs:\n" + table;
    }
    report(8, "score arithmetic", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--robomut") g_robomut = argv[i + 1];
        else if (flag == "--work") g_work = argv[i + 1];
    }
    if (g_robomut.empty() || g_work.empty()) {
        std::cerr << "usage: robomut_acceptance --robomut <binary> --work <dir>\n";
        return 2;
    }
    fs::create_directories(g_work);

    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 2;
    }
    if (g_failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criterion check(s) failed\n";
    return 1;
}
