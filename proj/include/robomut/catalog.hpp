#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robomut/mutation.hpp"
#include "robomut/parse.hpp"
#include "robomut/rng.hpp"
#include "robomut/scenario.hpp"
#include "robomut/unparse.hpp"

namespace robomut {

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered mutant list for one program/scenario pair. Ids are consecutive
/// from 1 in generation order; generation is a pure function of its inputs.
struct MutantCatalog {
    std::string preset;
    Program original;
    std::string original_hash;
    std::vector<Mutant> mutants;
};

inline std::string program_hash(const Program& p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(unparse_program(p))));
    return buf;
}

/// Reference-catalog category of a mutant (translation / rotation / gripper
/// operation / per-window sensor groups).
inline std::string mutant_category(const Mutant& m) {
    if (m.fault) {
        std::string where = m.fault->channel.kind == ChannelId::Kind::Robot ? "Robot" : "Box";
        std::string when = m.fault->window == FaultWindow::Initial ? "Initial" : "Final";
        return where + " " + when + " Position";
    }
    switch (m.kind) {
        case MutationOperator::Kind::RotationFlip:
        case MutationOperator::Kind::RotationPerturb:
            return "Rotation";
        case MutationOperator::Kind::TranslationSignFlip:
        case MutationOperator::Kind::ByToAbsolute:
            return "Translation";
        case MutationOperator::Kind::CommandDelete:
        case MutationOperator::Kind::CommandDuplicate:
        case MutationOperator::Kind::GripperOpposite:
            return "Gripper Operation";
        case MutationOperator::Kind::RORCompare:
        case MutationOperator::Kind::ConstantNegate:
            return "Comparison/Constant";
        default:
            return "Naive String";
    }
}

namespace detail {

inline const Command* command_at(const Program& p, const SiteId& site) {
    const Statement* s = resolve_statement(p, site.path);
    return s ? s->as_command() : nullptr;
}

inline void push_mutant(MutantCatalog& catalog, Mutant m, std::string description) {
    m.id = static_cast<int>(catalog.mutants.size()) + 1;
    m.description = std::move(description);
    catalog.mutants.push_back(std::move(m));
}

inline void push_edit(MutantCatalog& catalog, const Program& p, const MutationOperator& op,
                      const SiteId& site, std::string description) {
    auto m = apply_operator(p, op, site);
    if (!m)
        throw CatalogError("operator " +
                           std::string(MutationOperator::kind_text(op.kind)) +
                           " not applicable at " + site.text());
    push_mutant(catalog, std::move(*m), std::move(description));
}

inline std::string site_description(const char* what, const Program& p, const SiteId& site) {
    std::string out = what;
    if (const Command* cmd = command_at(p, site)) {
        out += " '";
        out += payload_text(*cmd);
        out += "'";
    }
    out += " at ";
    out += site.text();
    return out;
}

// Table-3 style reference catalog: one translation sign flip per axis on the
// first matching site, a rotation flip on every absolute turn, the three
// gripper operators on the first pick, then negate/noise sensor faults on
// robot (initial window) and box 0 (initial and final windows).
inline void generate_table3(MutantCatalog& catalog, const Program& p,
                            const ScenarioSpec& scenario) {
    std::map<char, SiteId> first_translation;
    for (const SiteId& site : enumerate_sites(p, SiteFilter::TranslationCommands)) {
        const Command* cmd = command_at(p, site);
        const auto axis = translation_axis(*cmd);
        if (axis && !first_translation.count(*axis)) first_translation.emplace(*axis, site);
    }
    for (char axis : {'x', 'y', 'z'})
        if (!first_translation.count(axis))
            throw CatalogError(std::string("reference preset needs a translation on axis ") +
                               axis);

    const auto turns = enumerate_sites(p, SiteFilter::AbsoluteTurnCommands);
    if (turns.size() < 2)
        throw CatalogError("reference preset needs at least two absolute turn commands");

    SiteId pick_site;
    bool have_pick = false;
    for (const SiteId& site : enumerate_sites(p, SiteFilter::GripperCommands)) {
        if (command_at(p, site)->verb == "pick") {
            pick_site = site;
            have_pick = true;
            break;
        }
    }
    if (!have_pick) throw CatalogError("reference preset needs a pick command");

    if (!scenario.find_box(0))
        throw CatalogError("reference preset needs a box with id 0 in the scenario");

    const MutationOperator sign_flip{MutationOperator::Kind::TranslationSignFlip};
    const MutationOperator rotation_flip{MutationOperator::Kind::RotationFlip};

    push_edit(catalog, p, sign_flip, first_translation.at('y'),
              "Change the y-value in translation");
    push_edit(catalog, p, rotation_flip, turns[0],
              "Change the angle orientation in rotation");
    push_edit(catalog, p, sign_flip, first_translation.at('z'),
              "Change the z-value in translation");
    push_edit(catalog, p, {MutationOperator::Kind::CommandDelete}, pick_site,
              "Do not change gripper status");
    push_edit(catalog, p, {MutationOperator::Kind::CommandDuplicate}, pick_site,
              "Change gripper status twice");
    push_edit(catalog, p, {MutationOperator::Kind::GripperOpposite}, pick_site,
              "Change gripper status with the opposite expected operation");
    for (std::size_t i = 1; i < turns.size(); ++i)
        push_edit(catalog, p, rotation_flip, turns[i], "Change angle orientation in rotation");
    push_edit(catalog, p, sign_flip, first_translation.at('x'),
              "Change x-value in translation");

    struct SensorGroup {
        ChannelId::Kind kind;
        FaultWindow window;
    };
    const SensorGroup groups[] = {
        {ChannelId::Kind::Robot, FaultWindow::Initial},
        {ChannelId::Kind::Box, FaultWindow::Initial},
        {ChannelId::Kind::Box, FaultWindow::Final},
    };
    for (const auto& group : groups) {
        for (auto op : {MutationOperator::Kind::SensorNegate,
                        MutationOperator::Kind::SensorNoise}) {
            for (auto axis : {ChannelId::Axis::X, ChannelId::Axis::Y, ChannelId::Axis::Z}) {
                const ChannelId channel{group.kind, axis, 0};
                const std::string component = ChannelId::axis_text(axis);
                const std::string description =
                    op == MutationOperator::Kind::SensorNegate
                        ? "Sensor reading with opposite expected value for " + component +
                              "-component"
                        : "Sensor reading with noise in " + component + "-component";
                push_mutant(catalog,
                            make_sensor_mutant(op, channel, group.window,
                                               scenario.noise_default),
                            description);
            }
        }
    }
}

inline void generate_domain_all(MutantCatalog& catalog, const Program& p) {
    for (const SiteId& site : enumerate_sites(p, SiteFilter::Commands)) {
        const MutationOperator::Kind kinds[] = {
            MutationOperator::Kind::RotationFlip,
            MutationOperator::Kind::TranslationSignFlip,
            MutationOperator::Kind::ByToAbsolute,
            MutationOperator::Kind::CommandDelete,
            MutationOperator::Kind::CommandDuplicate,
            MutationOperator::Kind::GripperOpposite,
        };
        for (const auto kind : kinds) {
            if (auto m = apply_operator(p, {kind}, site)) {
                const char* what = nullptr;
                switch (kind) {
                    case MutationOperator::Kind::RotationFlip: what = "invert rotation of"; break;
                    case MutationOperator::Kind::TranslationSignFlip:
                        what = "invert translation of";
                        break;
                    case MutationOperator::Kind::ByToAbsolute:
                        what = "treat offset as coordinate in";
                        break;
                    case MutationOperator::Kind::CommandDelete: what = "do nothing instead of"; break;
                    case MutationOperator::Kind::CommandDuplicate: what = "do twice"; break;
                    default: what = "opposite gripper operation for"; break;
                }
                push_mutant(catalog, std::move(*m), site_description(what, p, site));
            }
        }
    }
}

inline void generate_classical(MutantCatalog& catalog, const Program& p) {
    for (const SiteId& site : enumerate_sites(p, SiteFilter::All)) {
        if (site.kind == SiteId::Kind::Condition) {
            const Statement* s = resolve_statement(p, site.path);
            const If* iff = s->as_if();
            for (auto cmp : {Comparator::Eq, Comparator::Ne, Comparator::Lt, Comparator::Gt}) {
                if (cmp == iff->cmp) continue;
                MutationOperator op{MutationOperator::Kind::RORCompare};
                op.ror_to = cmp;
                if (auto m = apply_operator(p, op, site))
                    push_mutant(catalog, std::move(*m),
                                std::string("replace comparator with ") +
                                    comparator_text(cmp) + " at " + site.text());
            }
        } else if (site.kind == SiteId::Kind::Argument) {
            if (auto m = apply_operator(p, {MutationOperator::Kind::ConstantNegate}, site))
                push_mutant(catalog, std::move(*m),
                            "negate numeric constant at " + site.text());
        }
    }
}

inline void generate_naive_string(MutantCatalog& catalog, const Program& p) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    for (const SiteId& site : enumerate_sites(p, SiteFilter::Commands)) {
        const Command* cmd = command_at(p, site);
        const std::string payload = payload_text(*cmd);
        for (int pos = 0; pos < static_cast<int>(payload.size()); ++pos) {
            MutationOperator del{MutationOperator::Kind::NaiveCharEdit};
            del.char_pos = pos;
            del.char_delete = true;
            if (auto m = apply_operator(p, del, site)) {
                std::string edited = payload;
                edited.erase(static_cast<std::size_t>(pos), 1);
                push_mutant(catalog, std::move(*m),
                            "payload '" + payload + "' -> '" + edited + "'");
            }
            for (char c : alphabet) {
                if (c == payload[static_cast<std::size_t>(pos)]) continue;
                MutationOperator sub{MutationOperator::Kind::NaiveCharEdit};
                sub.char_pos = pos;
                sub.char_delete = false;
                sub.char_replacement = c;
                if (auto m = apply_operator(p, sub, site)) {
                    std::string edited = payload;
                    edited[static_cast<std::size_t>(pos)] = c;
                    push_mutant(catalog, std::move(*m),
                                "payload '" + payload + "' -> '" + edited + "'");
                }
            }
        }
    }
}

}  // namespace detail

/// Generates the mutant catalog for a preset:
///   table3       — the 26-mutant reference catalog
///   domain-all   — every applicable domain operator at every site
///   classical    — comparator replacements and constant negations
///   naive-string — exhaustive single-character payload edits
inline MutantCatalog generate_catalog(const Program& p, const ScenarioSpec& scenario,
                                      const std::string& preset) {
    MutantCatalog catalog;
    catalog.preset = preset;
    catalog.original = p;
    catalog.original_hash = program_hash(p);
    if (preset == "table3") detail::generate_table3(catalog, p, scenario);
    else if (preset == "domain-all") detail::generate_domain_all(catalog, p);
    else if (preset == "classical") detail::generate_classical(catalog, p);
    else if (preset == "naive-string") detail::generate_naive_string(catalog, p);
    else throw CatalogError("unknown preset '" + preset + "'");
    return catalog;
}

// --- JSON form --------------------------------------------------------------

inline nlohmann::json catalog_to_json(const MutantCatalog& catalog) {
    nlohmann::ordered_json mutants = nlohmann::ordered_json::array();
    for (const Mutant& m : catalog.mutants) {
        nlohmann::ordered_json j;
        j["id"] = m.id;
        j["family"] = MutationOperator::family_text(m.family);
        j["kind"] = MutationOperator::kind_text(m.kind);
        if (m.site) j["site_path"] = m.site->path;
        j["description"] = m.description;
        if (m.program) j["mutated_source"] = unparse_program(*m.program);
        if (m.fault) j["fault"] = fault_to_json(*m.fault);
        mutants.push_back(std::move(j));
    }
    return nlohmann::ordered_json{{"preset", catalog.preset},
                                  {"original_hash", catalog.original_hash},
                                  {"mutants", std::move(mutants)}};
}

inline MutantCatalog catalog_from_json(const nlohmann::json& j, const Program& original) {
    MutantCatalog catalog;
    catalog.preset = j.at("preset").get<std::string>();
    catalog.original = original;
    catalog.original_hash = j.at("original_hash").get<std::string>();
    for (const auto& mj : j.at("mutants")) {
        Mutant m;
        m.id = mj.at("id").get<int>();
        m.description = mj.at("description").get<std::string>();
        const std::string family = mj.at("family").get<std::string>();
        if (family == "domain") m.family = MutationOperator::Family::Domain;
        else if (family == "classical") m.family = MutationOperator::Family::Classical;
        else if (family == "naive-string") m.family = MutationOperator::Family::NaiveString;
        else throw CatalogError("bad mutant family '" + family + "'");
        const std::string kind = mj.at("kind").get<std::string>();
        bool known = false;
        for (int k = 0; k <= static_cast<int>(MutationOperator::Kind::RotationPerturb); ++k) {
            const auto candidate = static_cast<MutationOperator::Kind>(k);
            if (kind == MutationOperator::kind_text(candidate)) {
                m.kind = candidate;
                known = true;
                break;
            }
        }
        if (!known) throw CatalogError("bad mutant kind '" + kind + "'");
        if (mj.contains("site_path")) {
            SiteId site;
            site.path = mj.at("site_path").get<std::vector<int>>();
            site.kind = MutationOperator::target_site_kind(m.kind);
            m.site = site;
        }
        if (mj.contains("mutated_source"))
            m.program = parse_program(mj.at("mutated_source").get<std::string>());
        if (mj.contains("fault")) m.fault = fault_from_json(mj.at("fault"));
        if (!m.program && !m.fault)
            throw CatalogError("mutant " + std::to_string(m.id) +
                               " carries neither a program edit nor a fault");
        catalog.mutants.push_back(std::move(m));
    }
    return catalog;
}

}  // namespace robomut
