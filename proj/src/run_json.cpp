#include "multiga/run_json.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "multiga/digest.hpp"
#include "multiga/errors.hpp"

namespace multiga {

namespace {

using nlohmann::json;

json candidate_to_json(const Candidate& c) {
    json j;
    j["id"] = c.id;
    j["content"] = c.content;
    if (const auto* seed = std::get_if<SeedOrigin>(&c.origin)) {
        j["origin"] = {{"kind", "seed"}, {"generator", seed->generator_id}};
    } else {
        const auto& cx = std::get<CrossoverOrigin>(c.origin);
        j["origin"] = {{"kind", "crossover"}, {"parent", cx.parent_id}, {"mate", cx.mate_id}};
    }
    j["birth_generation"] = c.birth_generation;
    if (c.fitness)
        j["fitness"] = *c.fitness;
    else
        j["fitness"] = nullptr;
    j["digest"] = digest_hex(c.content_digest);
    return j;
}

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.id = j.at("id").get<CandidateId>();
    c.content = j.at("content").get<std::string>();
    c.content_digest = fnv1a64(c.content);
    const json& origin = j.at("origin");
    if (origin.at("kind") == "seed") {
        c.origin = SeedOrigin{origin.at("generator").get<std::string>()};
    } else {
        c.origin = CrossoverOrigin{origin.at("parent").get<CandidateId>(),
                                   origin.at("mate").get<CandidateId>()};
    }
    c.birth_generation = j.at("birth_generation").get<int>();
    if (j.contains("fitness") && !j.at("fitness").is_null())
        c.fitness = j.at("fitness").get<double>();
    return c;
}

json record_to_json(const GenerationRecord& r) {
    json j;
    j["generation"] = r.generation;
    json scores = json::array();
    for (const auto& [id, score] : r.scores) scores.push_back(json::array({id, score}));
    j["scores"] = scores;
    j["selected_parents"] = r.selected_parent_ids;
    json pairings = json::array();
    for (const auto& [p, m] : r.pairings) pairings.push_back(json::array({p, m}));
    j["pairings"] = pairings;
    j["children"] = r.child_ids;
    j["retired"] = r.retired_ids;
    j["evicted"] = r.evicted_ids;
    j["best_score"] = r.best_score;
    return j;
}

GenerationRecord record_from_json(const json& j) {
    GenerationRecord r;
    r.generation = j.at("generation").get<int>();
    for (const auto& pair : j.at("scores"))
        r.scores[pair.at(0).get<CandidateId>()] = pair.at(1).get<double>();
    r.selected_parent_ids = j.at("selected_parents").get<std::vector<CandidateId>>();
    for (const auto& pair : j.at("pairings"))
        r.pairings.emplace_back(pair.at(0).get<CandidateId>(), pair.at(1).get<CandidateId>());
    r.child_ids = j.at("children").get<std::vector<CandidateId>>();
    r.retired_ids = j.at("retired").get<std::vector<CandidateId>>();
    r.evicted_ids = j.at("evicted").get<std::vector<CandidateId>>();
    r.best_score = j.at("best_score").get<double>();
    return r;
}

std::string score_str(double score) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", score);
    return buf;
}

std::string id_list(const std::vector<CandidateId>& ids) {
    std::string out = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ",";
        out += "#" + std::to_string(ids[i]);
    }
    return out + "]";
}

}  // namespace

std::string run_result_to_json(const RunResult& result) {
    json j;
    j["best"] = candidate_to_json(result.best);
    j["termination"] = to_string(result.termination);
    j["generator_calls"] = result.total_generator_calls;
    j["evaluator_calls"] = result.total_evaluator_calls;
    j["history"] = json::array();
    for (const auto& r : result.history) j["history"].push_back(record_to_json(r));
    j["candidates"] = json::array();
    for (const auto& c : result.candidates) j["candidates"].push_back(candidate_to_json(c));
    j["warnings"] = result.warnings;
    return j.dump(2);
}

RunResult run_result_from_json(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::schema, "run result is not valid JSON");
    try {
        RunResult result;
        result.best = candidate_from_json(j.at("best"));
        const std::string term = j.at("termination").get<std::string>();
        result.termination = term == "target_reached" ? Termination::target_reached
                                                      : Termination::budget_exhausted;
        result.total_generator_calls = j.at("generator_calls").get<std::int64_t>();
        result.total_evaluator_calls = j.at("evaluator_calls").get<std::int64_t>();
        for (const auto& r : j.at("history")) result.history.push_back(record_from_json(r));
        for (const auto& c : j.at("candidates")) result.candidates.push_back(candidate_from_json(c));
        if (j.contains("warnings")) result.warnings = j.at("warnings").get<std::vector<std::string>>();
        return result;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, std::string("run result JSON malformed: ") + e.what());
    }
}

std::string render_lineage(const RunResult& result) {
    // Final recorded score and retirement generation per candidate.
    std::map<CandidateId, double> last_score;
    std::map<CandidateId, int> retired_at;
    for (const auto& rec : result.history) {
        for (const auto& [id, score] : rec.scores) last_score[id] = score;
        for (CandidateId id : rec.retired_ids) retired_at[id] = rec.generation;
        for (CandidateId id : rec.evicted_ids) retired_at[id] = rec.generation;
    }

    int max_generation = 0;
    for (const auto& c : result.candidates)
        max_generation = std::max(max_generation, c.birth_generation);

    std::ostringstream out;
    out << "lineage (" << result.candidates.size() << " candidates, "
        << result.history.size() << " evaluation rounds, " << to_string(result.termination)
        << ")\n";
    for (int g = 0; g <= max_generation; ++g) {
        out << "generation " << g << ":\n";
        for (const auto& c : result.candidates) {
            if (c.birth_generation != g) continue;
            out << "  #" << c.id << "  ";
            if (const auto* seed = std::get_if<SeedOrigin>(&c.origin)) {
                out << "seed[" << seed->generator_id << "]";
            } else {
                const auto& cx = std::get<CrossoverOrigin>(c.origin);
                out << "child[#" << cx.parent_id << " x #" << cx.mate_id << "]";
            }
            auto score = last_score.find(c.id);
            if (score != last_score.end())
                out << "  score=" << score_str(score->second);
            else
                out << "  score=-";
            if (c.id == result.best.id) out << "  <= best";
            auto gone = retired_at.find(c.id);
            if (gone != retired_at.end()) out << "  (retired after generation " << gone->second << ")";
            out << "\n";
        }
    }
    return out.str();
}

std::string render_summary(const RunResult& result) {
    std::ostringstream out;
    for (const auto& rec : result.history) {
        out << "gen " << rec.generation << ": population=" << rec.scores.size()
            << " best=" << score_str(rec.best_score);
        if (!rec.selected_parent_ids.empty()) {
            out << " parents=" << id_list(rec.selected_parent_ids)
                << " children=" << id_list(rec.child_ids)
                << " retired=" << id_list(rec.retired_ids);
            if (!rec.evicted_ids.empty()) out << " evicted=" << id_list(rec.evicted_ids);
        }
        out << "\n";
    }
    out << "termination: " << to_string(result.termination) << "\n";
    out << "best: #" << result.best.id << " score="
        << (result.best.fitness ? score_str(*result.best.fitness) : "-") << "\n";
    out << "calls: generator=" << result.total_generator_calls
        << " evaluator=" << result.total_evaluator_calls << "\n";
    return out.str();
}

}  // namespace multiga
