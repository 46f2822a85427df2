#pragma once

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "robomut/catalog.hpp"
#include "robomut/rng.hpp"
#include "robomut/sim.hpp"
#include "robomut/suite.hpp"
#include "robomut/validate.hpp"

namespace robomut {

/// Configuration or gate failure: the experiment itself is broken (for
/// example the original program fails its own suite), as opposed to a
/// mutant result.
class HarnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Classification { Killed, Survived, Invalid, Infeasible };

inline const char* classification_text(Classification c) {
    switch (c) {
        case Classification::Killed: return "killed";
        case Classification::Survived: return "survived";
        case Classification::Invalid: return "invalid";
        default: return "infeasible";
    }
}

enum class TestVerdict { Pass, Fail, NotEvaluated };

inline const char* verdict_text(TestVerdict v) {
    switch (v) {
        case TestVerdict::Pass: return "pass";
        case TestVerdict::Fail: return "fail";
        default: return "not-evaluated";
    }
}

/// Outcome of one run (original or mutant) against the suite.
struct RunOutcome {
    std::vector<TestVerdict> verdicts;  // aligned with suite.tests
    Trace::Status trace_status = Trace::Status::Completed;
    bool validated = true;              // static validation passed
    bool ran = false;                   // false when invalid before execution
    WorldState final_state;
    std::vector<Event> events;
    std::string abort_reason;

    bool any_failed() const {
        for (const auto v : verdicts)
            if (v == TestVerdict::Fail) return true;
        return false;
    }
    bool all_passed() const {
        for (const auto v : verdicts)
            if (v != TestVerdict::Pass) return false;
        return true;
    }
};

/// Invalid before infeasible before killed before survived.
inline Classification classify_outcome(const RunOutcome& outcome) {
    if (!outcome.validated || outcome.trace_status == Trace::Status::InvalidCommand)
        return Classification::Invalid;
    if (outcome.trace_status == Trace::Status::Infeasible) return Classification::Infeasible;
    if (outcome.any_failed()) return Classification::Killed;
    return Classification::Survived;
}

namespace detail {

/// Per-test independent stream: insertion-order independent so adding a
/// test never disturbs the draws of the others (kill sets only grow).
inline Rng test_stream(std::uint64_t sensor_seed, const std::string& test_name) {
    return Rng(mix64(sensor_seed ^ fnv1a64(test_name)));
}

}  // namespace detail

/// Runs one program variant under the suite and evaluates every assertion:
/// initial tests against the initial snapshot, always tests against every
/// snapshot (first violation fails), final tests against the completed
/// final state. Sensed reads see the mutant's faults under window rules.
inline RunOutcome evaluate_run(const Program& program, const ScenarioSpec& scenario,
                               const std::vector<SensorFault>& faults,
                               const TestSuite& suite, RunSeeds seeds) {
    RunOutcome outcome;
    outcome.verdicts.assign(suite.tests.size(), TestVerdict::NotEvaluated);

    if (!validate_program(program).empty()) {
        outcome.validated = false;
        return outcome;
    }

    const Trace trace = run_program(program, scenario, faults, seeds);
    outcome.ran = true;
    outcome.trace_status = trace.status;
    outcome.final_state = trace.final_state();
    outcome.events = outcome.final_state.events;
    outcome.abort_reason = trace.abort_reason;
    const bool completed = trace.status == Trace::Status::Completed;

    for (std::size_t i = 0; i < suite.tests.size(); ++i) {
        const TestCase& test = suite.tests[i];
        Rng rng = detail::test_stream(seeds.sensor, test.name);
        switch (test.when) {
            case TestCase::When::Initial: {
                const bool ok =
                    evaluate_assertion(test, trace.initial, faults, WindowState{}, rng);
                outcome.verdicts[i] = ok ? TestVerdict::Pass : TestVerdict::Fail;
                break;
            }
            case TestCase::When::Always: {
                bool failed =
                    !evaluate_assertion(test, trace.initial, faults, WindowState{}, rng);
                if (!failed) {
                    for (const TraceStep& step : trace.steps) {
                        if (!evaluate_assertion(test, step.after, faults, step.window, rng)) {
                            failed = true;
                            break;
                        }
                    }
                }
                if (failed) outcome.verdicts[i] = TestVerdict::Fail;
                else if (completed) outcome.verdicts[i] = TestVerdict::Pass;
                // aborted without a violation: leave not-evaluated
                break;
            }
            case TestCase::When::Final: {
                if (!completed) break;  // not evaluated past the aborting point
                const bool ok = evaluate_assertion(test, trace.final_state(), faults,
                                                   trace.final_window(), rng);
                outcome.verdicts[i] = ok ? TestVerdict::Pass : TestVerdict::Fail;
                break;
            }
        }
    }
    return outcome;
}

// --- experiment ------------------------------------------------------------

struct MutantRoundRecord {
    Classification classification = Classification::Survived;
    std::vector<TestVerdict> verdicts;
    std::vector<Event> events;
    WorldState final_state;
    bool completed = false;
    std::string abort_reason;
};

struct RoundRecord {
    int round = 0;                 // 1-based
    std::uint64_t env_seed = 0;    // environment randomization, shared per round
    WorldState original_final;
    std::vector<MutantRoundRecord> mutants;  // catalog order
};

struct ScoreRound {
    int round = 0;
    std::uint64_t seed = 0;
    int killed = 0, survived = 0, invalid = 0, infeasible = 0;
    double score = 0.0;
    bool has_score = false;  // false when the denominator is empty
};

struct ScoreReport {
    std::vector<ScoreRound> per_round;
    double mean_score = 0.0, min_score = 0.0, max_score = 0.0;
    bool has_aggregate = false;
    std::vector<int> probable_equivalents;
};

struct ExperimentOptions {
    std::uint64_t master_seed = 0;
    int rounds = 1;
    bool include_invalid = false;
    bool include_infeasible = false;
    int parallel = 1;
};

struct ExperimentResult {
    std::vector<RoundRecord> rounds;
    ScoreReport scores;
};

/// Mutation score over one round's counts. Invalid and infeasible mutants
/// are excluded from the denominator unless explicitly included.
inline ScoreRound score_round(int round, std::uint64_t seed, int killed, int survived,
                              int invalid, int infeasible, bool include_invalid,
                              bool include_infeasible) {
    ScoreRound s;
    s.round = round;
    s.seed = seed;
    s.killed = killed;
    s.survived = survived;
    s.invalid = invalid;
    s.infeasible = infeasible;
    int denominator = killed + survived;
    if (include_invalid) denominator += invalid;
    if (include_infeasible) denominator += infeasible;
    if (denominator > 0) {
        s.score = static_cast<double>(killed) / denominator;
        s.has_score = true;
    }
    return s;
}

inline ScoreReport aggregate_scores(const std::vector<ScoreRound>& rounds) {
    ScoreReport report;
    report.per_round = rounds;
    bool first = true;
    double sum = 0.0;
    int n = 0;
    for (const auto& r : rounds) {
        if (!r.has_score) continue;
        sum += r.score;
        ++n;
        if (first || r.score < report.min_score) report.min_score = r.score;
        if (first || r.score > report.max_score) report.max_score = r.score;
        first = false;
    }
    if (n > 0) {
        report.mean_score = sum / n;
        report.has_aggregate = true;
    }
    return report;
}

/// Runs the full experiment: for each round, derive the round's environment
/// seed, gate on the original program passing the whole suite, then run and
/// classify every mutant. Mutant executions within a round are independent;
/// `parallel` controls how many run concurrently and never affects results.
inline ExperimentResult run_experiment(const Program& program, const ScenarioSpec& scenario,
                                       const MutantCatalog& catalog, const TestSuite& suite,
                                       const ExperimentOptions& options) {
    if (options.rounds < 1) throw HarnessError("rounds must be >= 1");
    if (!validate_program(program).empty())
        throw HarnessError("the original program fails validation");
    if (catalog.original_hash != program_hash(program))
        throw HarnessError("catalog was generated from a different program");

    ExperimentResult result;
    std::vector<ScoreRound> round_scores;

    for (int round = 1; round <= options.rounds; ++round) {
        const std::uint64_t env_seed = derive_seed(options.master_seed,
                                                   static_cast<std::uint64_t>(round), 0);
        RoundRecord record;
        record.round = round;
        record.env_seed = env_seed;

        const RunOutcome original =
            evaluate_run(program, scenario, {}, suite, RunSeeds{env_seed, env_seed});
        if (original.trace_status != Trace::Status::Completed)
            throw HarnessError("the original program did not complete in round " +
                               std::to_string(round) + ": " + original.abort_reason);
        if (!original.all_passed()) {
            std::string failed;
            for (std::size_t i = 0; i < suite.tests.size(); ++i)
                if (original.verdicts[i] != TestVerdict::Pass)
                    failed += (failed.empty() ? "" : ", ") + suite.tests[i].name;
            throw HarnessError("the original program fails the suite in round " +
                               std::to_string(round) + " (" + failed + ")");
        }
        record.original_final = original.final_state;

        record.mutants.resize(catalog.mutants.size());
        const int workers =
            std::max(1, std::min(options.parallel,
                                 static_cast<int>(catalog.mutants.size()> 0
                                                      ? catalog.mutants.size()
                                                      : 1)));
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= catalog.mutants.size()) return;
                const Mutant& mutant = catalog.mutants[i];
                const std::uint64_t sensor_seed =
                    derive_seed(options.master_seed, static_cast<std::uint64_t>(round),
                                static_cast<std::uint64_t>(mutant.id));
                const Program& variant = mutant.program ? *mutant.program : program;
                std::vector<SensorFault> faults;
                if (mutant.fault) faults.push_back(*mutant.fault);
                const RunOutcome outcome = evaluate_run(variant, scenario, faults, suite,
                                                        RunSeeds{env_seed, sensor_seed});
                MutantRoundRecord& slot = record.mutants[i];
                slot.classification = classify_outcome(outcome);
                slot.verdicts = outcome.verdicts;
                slot.events = outcome.events;
                slot.final_state = outcome.final_state;
                slot.completed = outcome.ran &&
                                 outcome.trace_status == Trace::Status::Completed;
                slot.abort_reason = outcome.abort_reason;
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int t = 0; t < workers; ++t) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }

        int killed = 0, survived = 0, invalid = 0, infeasible = 0;
        for (const auto& m : record.mutants) {
            switch (m.classification) {
                case Classification::Killed: ++killed; break;
                case Classification::Survived: ++survived; break;
                case Classification::Invalid: ++invalid; break;
                case Classification::Infeasible: ++infeasible; break;
            }
        }
        round_scores.push_back(score_round(round, env_seed, killed, survived, invalid,
                                           infeasible, options.include_invalid,
                                           options.include_infeasible));
        result.rounds.push_back(std::move(record));
    }

    result.scores = aggregate_scores(round_scores);

    // survived in every round with the original's exact final world state:
    // report as probably equivalent (still counted as survived)
    for (std::size_t i = 0; i < catalog.mutants.size(); ++i) {
        bool equivalent = !result.rounds.empty();
        for (const auto& round : result.rounds) {
            const auto& m = round.mutants[i];
            if (m.classification != Classification::Survived || !m.completed ||
                !m.final_state.same_outcome(round.original_final)) {
                equivalent = false;
                break;
            }
        }
        if (equivalent)
            result.scores.probable_equivalents.push_back(catalog.mutants[i].id);
    }
    return result;
}

}  // namespace robomut
