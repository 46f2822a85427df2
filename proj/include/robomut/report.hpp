#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "robomut/harness.hpp"

namespace robomut {

inline constexpr const char* kToolVersion = "0.1.0";

/// Hash string for raw file bytes; reports embed these instead of input
/// copies so drift is detectable without bloating the file.
inline std::string bytes_hash(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

struct ReportInputs {
    std::string program_hash;
    std::string scenario_hash;
    std::string mutants_hash;
    std::string suite_hash;
};

/// Percentage with up to two decimals, trailing zeros trimmed ("92%",
/// "76.92%").
inline std::string format_percent(double fraction) {
    const double percent = std::round(fraction * 100.0 * 100.0) / 100.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", percent);
    std::string out = buf;
    while (!out.empty() && out.back() == '0') out.pop_back();
    if (!out.empty() && out.back() == '.') out.pop_back();
    return out + "%";
}

/// Builds the report document. Deterministic by construction: no
/// timestamps, fixed key order, shortest-round-trip numbers. Re-running
/// with the same inputs and seed reproduces the bytes exactly.
inline nlohmann::ordered_json report_to_json(const ExperimentResult& result,
                                             const MutantCatalog& catalog,
                                             const TestSuite& suite,
                                             const ReportInputs& inputs,
                                             const ExperimentOptions& options) {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["inputs"] = {{"program", inputs.program_hash},
                   {"scenario", inputs.scenario_hash},
                   {"mutants", inputs.mutants_hash},
                   {"suite", inputs.suite_hash}};
    j["config"] = {{"rounds", options.rounds},
                   {"master_seed", options.master_seed},
                   {"include_invalid", options.include_invalid},
                   {"include_infeasible", options.include_infeasible}};

    nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
    for (const auto& round : result.rounds) {
        nlohmann::ordered_json mutants = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < round.mutants.size(); ++i) {
            const auto& m = round.mutants[i];
            nlohmann::ordered_json mj;
            mj["id"] = catalog.mutants[i].id;
            mj["classification"] = classification_text(m.classification);
            nlohmann::ordered_json failed = nlohmann::ordered_json::array();
            for (std::size_t t = 0; t < m.verdicts.size(); ++t)
                if (m.verdicts[t] == TestVerdict::Fail) failed.push_back(suite.tests[t].name);
            mj["failed_tests"] = std::move(failed);
            nlohmann::ordered_json events = nlohmann::ordered_json::array();
            for (const auto& e : m.events)
                events.push_back(std::string(Event::kind_text(e.kind)) + "@" +
                                 std::to_string(e.step));
            mj["events"] = std::move(events);
            if (!m.abort_reason.empty()) mj["abort_reason"] = m.abort_reason;
            mutants.push_back(std::move(mj));
        }
        rounds.push_back(nlohmann::ordered_json{{"round", round.round},
                                                {"seed", round.env_seed},
                                                {"mutants", std::move(mutants)}});
    }
    j["rounds"] = std::move(rounds);

    nlohmann::ordered_json per_round = nlohmann::ordered_json::array();
    for (const auto& s : result.scores.per_round) {
        nlohmann::ordered_json sj{{"round", s.round},
                                  {"seed", s.seed},
                                  {"killed", s.killed},
                                  {"survived", s.survived},
                                  {"invalid", s.invalid},
                                  {"infeasible", s.infeasible}};
        if (s.has_score) sj["score"] = s.score;
        else sj["score"] = nullptr;
        per_round.push_back(std::move(sj));
    }
    nlohmann::ordered_json scores;
    scores["per_round"] = std::move(per_round);
    if (result.scores.has_aggregate)
        scores["aggregate"] = {{"mean_score", result.scores.mean_score},
                               {"min_score", result.scores.min_score},
                               {"max_score", result.scores.max_score}};
    else
        scores["aggregate"] = nullptr;
    scores["probable_equivalents"] = result.scores.probable_equivalents;
    j["scores"] = std::move(scores);
    return j;
}

/// Renders the per-round score table plus mean:
///
///   Round  Score
///   #1     92%
///   ...
///   Mean   89%
inline std::string render_score_table(const nlohmann::json& report) {
    std::string out = "Round  Score\n";
    const auto& scores = report.at("scores");
    double sum = 0.0;
    int n = 0;
    for (const auto& r : scores.at("per_round")) {
        std::string row = "#" + std::to_string(r.at("round").get<int>());
        row.resize(7, ' ');
        if (r.at("score").is_null()) {
            row += "n/a";
        } else {
            const double score = r.at("score").get<double>();
            row += format_percent(score);
            sum += score;
            ++n;
        }
        out += row + "\n";
    }
    std::string mean_row = "Mean";
    mean_row.resize(7, ' ');
    out += mean_row + (n > 0 ? format_percent(sum / n) : std::string("n/a")) + "\n";
    return out;
}

}  // namespace robomut
