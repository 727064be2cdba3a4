#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "multiga/backend.hpp"
#include "multiga/errors.hpp"
#include "multiga/rng.hpp"
#include "multiga/taskspec.hpp"
#include "multiga/template.hpp"
#include "multiga/types.hpp"

namespace multiga {

/// Extension points for one run.
struct RunHooks {
    /// Adds candidate-derived bindings to the eval prompt context (the SQL
    /// task binds the query's execution output here). Called once per
    /// scoring call, possibly concurrently.
    std::function<void(const Candidate&, TemplateContext&)> eval_bindings;
    /// Called after each evaluation round; return false to cancel the run.
    std::function<bool(const RunResult& partial)> on_round;
};

/// Thrown when a run dies mid-flight; carries the audit trail so far.
class RunAborted : public Error {
public:
    RunAborted(ErrorKind kind, const std::string& message, RunResult partial)
        : Error(kind, message), partial_(std::move(partial)) {}

    const RunResult& partial() const { return partial_; }

private:
    RunResult partial_;
};

/// One logical optimization run: the generation loop over a population of
/// text candidates, with evaluator-scored fitness, top-k selection, uniform
/// mate pairing, LLM crossover, and threshold retirement.
///
/// All engine state (ids, fitness cache, rng, counters) is confined to one
/// instance; concurrent runs share nothing. Backend calls for distinct
/// candidates may overlap up to config.max_parallel_calls, but results join
/// at fixed positions and the pairing draws consume the rng sequentially, so
/// the recorded history does not depend on completion order.
class Engine {
public:
    Engine(GAConfig config, std::vector<BackendHandle> generators, BackendHandle evaluator,
           TaskSpec task, TemplateContext context, RunHooks hooks = {});

    /// Seeds the population: samples_per_generator completions from every
    /// generator, prompted identically, in declaration order then sample
    /// index. Failed slots are dropped with a warning; if every slot fails
    /// the run aborts with an initialization error.
    Population initialize_population();

    /// Scores every member in [0,1]. Previously seen content digests are
    /// served from the run-local cache without a new evaluator call; an
    /// unparsable reply is retried twice and then recorded as 0.0 (invalid
    /// candidate).
    ScoreMap evaluate_fitness(Population& population);

    /// Ids of the top-min(k, |population|) members by descending score;
    /// equal scores keep population order.
    std::vector<CandidateId> select_parents(const Population& population,
                                            const ScoreMap& scores, int k) const;

    /// One mate per parent, drawn uniformly from the population excluding
    /// that parent. Mates may repeat across pairs and may themselves be
    /// parents. Fully determined by the run's rng_seed.
    std::vector<std::pair<CandidateId, CandidateId>> pair_mates(
        const std::vector<CandidateId>& parents, const Population& population);

    /// One crossover child per pair, synthesized by the evaluator model.
    /// Children are born unscored into generation birth_generation. A failed
    /// call drops that child with a warning; all pairs failing yields an
    /// empty child list and the run proceeds.
    std::vector<Candidate> recombine(const std::vector<std::pair<CandidateId, CandidateId>>& pairs,
                                     const Population& population, int birth_generation);

    /// Next generation: scored members at or above retire_threshold plus the
    /// children. When a population cap is exceeded, lowest-scored survivors
    /// are evicted first; children are never evicted at birth. An empty
    /// result aborts with an extinction error.
    Population select_population(const Population& current, const ScoreMap& scores,
                                 std::vector<Candidate> children,
                                 std::vector<CandidateId>* retired_out = nullptr,
                                 std::vector<CandidateId>* evicted_out = nullptr);

    /// The full loop: evaluate, early-stop once the best strictly exceeds
    /// target_fitness, select, recombine, retire; at most max_generations
    /// evaluation rounds and max_generations-1 recombination rounds.
    RunResult run();

    std::int64_t generator_calls() const { return generator_calls_.load(); }
    std::int64_t evaluator_calls() const { return evaluator_calls_.load(); }

private:
    std::string render_eval_prompt(const Candidate& candidate, std::string* system_out) const;
    double score_candidate(const Candidate& candidate);
    void record_warning(const std::string& message);

    GAConfig config_;
    std::vector<BackendHandle> generators_;
    BackendHandle evaluator_;
    TaskSpec task_;
    TemplateContext context_;
    RunHooks hooks_;

    CandidateId next_id_ = 0;
    Rng rng_;
    std::unordered_map<std::uint64_t, double> fitness_cache_;  // digest -> score
    std::atomic<std::int64_t> generator_calls_{0};
    std::atomic<std::int64_t> evaluator_calls_{0};
    std::vector<Candidate> roster_;
    std::vector<std::string> warnings_;
    std::mutex warn_mutex_;
};

/// Convenience wrapper constructing an Engine and running it.
RunResult run_ga(const GAConfig& config, const std::vector<BackendHandle>& generators,
                 const BackendHandle& evaluator, const TaskSpec& task,
                 const TemplateContext& context, const RunHooks& hooks = {});

}  // namespace multiga
