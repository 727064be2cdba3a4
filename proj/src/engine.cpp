#include "multiga/engine.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>

#include "multiga/parallel.hpp"
#include "multiga/score_parser.hpp"

namespace multiga {

namespace {

// Parse retries for an evaluator reply with no decimal literal; after these
// the candidate is recorded as invalid (0.0).
constexpr int kParseRetries = 2;

}  // namespace

Engine::Engine(GAConfig config, std::vector<BackendHandle> generators, BackendHandle evaluator,
               TaskSpec task, TemplateContext context, RunHooks hooks)
    : config_(std::move(config)),
      generators_(std::move(generators)),
      evaluator_(std::move(evaluator)),
      task_(std::move(task)),
      context_(std::move(context)),
      hooks_(std::move(hooks)),
      rng_(config_.rng_seed) {
    config_.validate();
    if (generators_.empty())
        throw Error(ErrorKind::config, "at least one generator backend is required");
    for (const auto& g : generators_)
        if (!g) throw Error(ErrorKind::config, "generator backend handle is null");
    if (!evaluator_) throw Error(ErrorKind::config, "evaluator backend handle is null");
}

void Engine::record_warning(const std::string& message) {
    std::lock_guard lock(warn_mutex_);
    warnings_.push_back(message);
}

Population Engine::initialize_population() {
    // One rendering, sent to every generator: the init prompt is
    // byte-identical across models for the same task inputs.
    const std::string system_text = render(task_.init_system, context_);
    const std::string user_text = render(task_.init_user, context_);
    const std::string_view marker = task_.answer_rule.kind == AnswerRuleKind::marker
                                        ? std::string_view(task_.answer_rule.pattern)
                                        : std::string_view{};

    struct Slot {
        std::size_t generator_index;
        std::optional<std::string> content;
        std::string warning;
    };
    std::vector<Slot> slots;
    for (std::size_t g = 0; g < generators_.size(); ++g)
        for (int s = 0; s < config_.samples_per_generator; ++s)
            slots.push_back(Slot{g, std::nullopt, {}});

    parallel_for(slots.size(), config_.max_parallel_calls, [&](std::size_t i) {
        Slot& slot = slots[i];
        const auto& generator = generators_[slot.generator_index];
        ++generator_calls_;
        try {
            ChatExchange exchange = generator->complete(system_text, user_text);
            SanitizedReply clean = sanitize_solution(exchange.reply_text, marker);
            if (clean.marker_missing)
                slot.warning = "seed from '" + generator->profile().name +
                               "' lacks required marker '" + std::string(marker) + "'";
            slot.content = std::move(clean.text);
        } catch (const Error& e) {
            slot.warning = "seed slot from '" + generator->profile().name +
                           "' dropped: " + e.what();
        }
    });

    Population population;
    population.generation = 0;
    for (const Slot& slot : slots) {
        if (!slot.warning.empty()) record_warning(slot.warning);
        if (!slot.content) continue;
        Candidate seed = Candidate::seed(next_id_++, *slot.content,
                                         generators_[slot.generator_index]->profile().name);
        roster_.push_back(seed);
        population.members.push_back(std::move(seed));
    }
    if (population.members.empty())
        throw Error(ErrorKind::initialization,
                    "population initialization failed: every seed slot was dropped");
    return population;
}

std::string Engine::render_eval_prompt(const Candidate& candidate, std::string* system_out) const {
    TemplateContext ctx = context_;
    ctx.set(task_.candidate_placeholder, candidate.content);
    if (hooks_.eval_bindings) hooks_.eval_bindings(candidate, ctx);
    if (system_out) *system_out = render(task_.eval_system, ctx);
    return render(task_.eval_user, ctx);
}

double Engine::score_candidate(const Candidate& candidate) {
    std::string system_text;
    const std::string user_text = render_eval_prompt(candidate, &system_text);
    for (int attempt = 0; attempt <= kParseRetries; ++attempt) {
        ++evaluator_calls_;
        ChatExchange exchange = evaluator_->complete(system_text, user_text);
        if (auto score = try_parse_fitness(exchange.reply_text)) return *score;
    }
    record_warning("candidate #" + std::to_string(candidate.id) +
                   ": evaluator reply unparsable after " + std::to_string(kParseRetries + 1) +
                   " attempts; recorded 0.0 (invalid)");
    return 0.0;
}

ScoreMap Engine::evaluate_fitness(Population& population) {
    if (population.members.empty())
        throw Error(ErrorKind::validation, "cannot evaluate an empty population");

    // One evaluator call per UNIQUE unseen digest: members sharing content
    // share the cached score without paying the evaluator twice, and the
    // call count stays independent of scheduling.
    std::vector<std::uint64_t> pending;
    std::vector<const Candidate*> pending_candidate;
    for (const auto& member : population.members) {
        if (fitness_cache_.count(member.content_digest)) continue;
        if (std::find(pending.begin(), pending.end(), member.content_digest) != pending.end())
            continue;
        pending.push_back(member.content_digest);
        pending_candidate.push_back(&member);
    }

    std::vector<double> fresh(pending.size(), 0.0);
    parallel_for(pending.size(), config_.max_parallel_calls,
                 [&](std::size_t i) { fresh[i] = score_candidate(*pending_candidate[i]); });
    for (std::size_t i = 0; i < pending.size(); ++i) fitness_cache_[pending[i]] = fresh[i];

    ScoreMap scores;
    for (auto& member : population.members) {
        const double score = fitness_cache_.at(member.content_digest);
        member.fitness = score;
        if (member.id < roster_.size()) roster_[member.id].fitness = score;
        scores[member.id] = score;
    }
    return scores;
}

std::vector<CandidateId> Engine::select_parents(const Population& population,
                                                const ScoreMap& scores, int k) const {
    std::vector<CandidateId> ids;
    ids.reserve(population.members.size());
    for (const auto& member : population.members) {
        if (!scores.count(member.id))
            throw Error(ErrorKind::validation,
                        "score map does not cover candidate #" + std::to_string(member.id));
        ids.push_back(member.id);
    }
    // Stable: equal scores keep population order.
    std::stable_sort(ids.begin(), ids.end(), [&](CandidateId a, CandidateId b) {
        return scores.at(a) > scores.at(b);
    });
    const std::size_t take = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(k));
    ids.resize(take);
    return ids;
}

std::vector<std::pair<CandidateId, CandidateId>> Engine::pair_mates(
    const std::vector<CandidateId>& parents, const Population& population) {
    std::vector<std::pair<CandidateId, CandidateId>> pairs;
    if (population.members.size() < 2) {
        record_warning("population of " + std::to_string(population.members.size()) +
                       " admits no mate pairs; recombination skipped");
        return pairs;
    }
    // Draws happen sequentially in parent order, so the pairing list is a
    // pure function of rng_seed regardless of call concurrency elsewhere.
    for (CandidateId parent : parents) {
        std::size_t parent_index = population.members.size();
        for (std::size_t i = 0; i < population.members.size(); ++i) {
            if (population.members[i].id == parent) {
                parent_index = i;
                break;
            }
        }
        if (parent_index == population.members.size())
            throw Error(ErrorKind::validation,
                        "parent #" + std::to_string(parent) + " is not in the population");
        std::size_t mate_index =
            static_cast<std::size_t>(rng_.below(population.members.size() - 1));
        if (mate_index >= parent_index) ++mate_index;  // uniform over everyone but the parent
        pairs.emplace_back(parent, population.members[mate_index].id);
    }
    return pairs;
}

std::vector<Candidate> Engine::recombine(
    const std::vector<std::pair<CandidateId, CandidateId>>& pairs, const Population& population,
    int birth_generation) {
    const std::string_view marker = task_.answer_rule.kind == AnswerRuleKind::marker
                                        ? std::string_view(task_.answer_rule.pattern)
                                        : std::string_view{};

    struct Slot {
        std::optional<std::string> content;
        std::string warning;
    };
    std::vector<Slot> slots(pairs.size());

    parallel_for(pairs.size(), config_.max_parallel_calls, [&](std::size_t i) {
        const auto& [parent_id, mate_id] = pairs[i];
        const Candidate* parent = population.find(parent_id);
        const Candidate* mate = population.find(mate_id);
        if (!parent || !mate) {
            slots[i].warning = "pairing references a candidate outside the population";
            return;
        }
        TemplateContext ctx = context_;
        ctx.set("parent_1", parent->content);
        ctx.set("parent_2", mate->content);
        ++evaluator_calls_;
        try {
            ChatExchange exchange = evaluator_->complete(render(task_.crossover_system, ctx),
                                                         render(task_.crossover_user, ctx));
            SanitizedReply clean = sanitize_solution(exchange.reply_text, marker);
            if (clean.marker_missing)
                slots[i].warning = "child of #" + std::to_string(parent_id) + " x #" +
                                   std::to_string(mate_id) + " lacks required marker";
            slots[i].content = std::move(clean.text);
        } catch (const Error& e) {
            slots[i].warning = "child of #" + std::to_string(parent_id) + " x #" +
                               std::to_string(mate_id) + " dropped: " + e.what();
        }
    });

    std::vector<Candidate> children;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!slots[i].warning.empty()) record_warning(slots[i].warning);
        if (!slots[i].content) continue;
        Candidate child = Candidate::crossover(next_id_++, std::move(*slots[i].content),
                                               pairs[i].first, pairs[i].second, birth_generation);
        roster_.push_back(child);
        children.push_back(std::move(child));
    }
    return children;
}

Population Engine::select_population(const Population& current, const ScoreMap& scores,
                                     std::vector<Candidate> children,
                                     std::vector<CandidateId>* retired_out,
                                     std::vector<CandidateId>* evicted_out) {
    Population next;
    next.generation = current.generation + 1;

    std::vector<CandidateId> retired;
    for (const auto& member : current.members) {
        auto it = scores.find(member.id);
        if (it == scores.end())
            throw Error(ErrorKind::validation,
                        "candidate #" + std::to_string(member.id) + " is unscored");
        if (it->second >= config_.retire_threshold) {
            next.members.push_back(member);
        } else {
            retired.push_back(member.id);
        }
    }

    std::vector<CandidateId> evicted;
    if (config_.population_cap) {
        const std::size_t cap = static_cast<std::size_t>(*config_.population_cap);
        // Children are exempt at birth, so only survivors can be evicted,
        // lowest score first, later position first among equals.
        while (next.members.size() + children.size() > cap && !next.members.empty()) {
            std::size_t worst = 0;
            for (std::size_t i = 1; i < next.members.size(); ++i) {
                if (scores.at(next.members[i].id) <= scores.at(next.members[worst].id)) worst = i;
            }
            evicted.push_back(next.members[worst].id);
            next.members.erase(next.members.begin() + static_cast<std::ptrdiff_t>(worst));
        }
    }

    for (auto& child : children) next.members.push_back(std::move(child));

    if (retired_out) *retired_out = std::move(retired);
    if (evicted_out) *evicted_out = std::move(evicted);
    if (next.members.empty())
        throw Error(ErrorKind::extinction,
                    "every candidate was retired and no children were produced");
    return next;
}

RunResult Engine::run() {
    RunResult result;
    auto abort_with = [&](const Error& e) -> RunAborted {
        result.candidates = roster_;
        result.total_generator_calls = generator_calls_.load();
        result.total_evaluator_calls = evaluator_calls_.load();
        result.warnings = warnings_;
        return RunAborted(e.kind(), e.what(), std::move(result));
    };

    try {
        Population population = initialize_population();
        ScoreMap scores;
        for (int t = 0;; ++t) {
            scores = evaluate_fitness(population);
            GenerationRecord record;
            record.generation = t;
            record.scores = scores;
            record.best_score = 0.0;
            for (const auto& [id, score] : scores)
                record.best_score = std::max(record.best_score, score);
            result.history.push_back(record);

            if (hooks_.on_round && !hooks_.on_round(result))
                throw Error(ErrorKind::cancelled, "run cancelled");

            if (t == config_.max_generations - 1) {
                result.termination = Termination::budget_exhausted;
                break;
            }
            if (record.best_score > config_.target_fitness) {
                result.termination = Termination::target_reached;
                break;
            }

            GenerationRecord& rec = result.history.back();
            rec.selected_parent_ids = select_parents(population, scores, config_.top_k);
            rec.pairings = pair_mates(rec.selected_parent_ids, population);
            std::vector<Candidate> children = recombine(rec.pairings, population, t + 1);
            for (const auto& child : children) rec.child_ids.push_back(child.id);
            population = select_population(population, scores, std::move(children),
                                           &rec.retired_ids, &rec.evicted_ids);
        }

        // argmax over the final evaluated population, earliest position wins
        // ties.
        const Candidate* best = nullptr;
        for (const auto& member : population.members) {
            if (!best || scores.at(member.id) > scores.at(best->id)) best = &member;
        }
        result.best = *best;
        result.candidates = roster_;
        result.total_generator_calls = generator_calls_.load();
        result.total_evaluator_calls = evaluator_calls_.load();
        result.warnings = warnings_;
        return result;
    } catch (const RunAborted&) {
        throw;
    } catch (const Error& e) {
        throw abort_with(e);
    }
}

RunResult run_ga(const GAConfig& config, const std::vector<BackendHandle>& generators,
                 const BackendHandle& evaluator, const TaskSpec& task,
                 const TemplateContext& context, const RunHooks& hooks) {
    Engine engine(config, generators, evaluator, task, context, hooks);
    return engine.run();
}

}  // namespace multiga
