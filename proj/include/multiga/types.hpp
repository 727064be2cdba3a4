#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "multiga/digest.hpp"

namespace multiga {

using CandidateId = std::uint64_t;

/// Where a candidate came from: a seed drawn from one generator model, or a
/// crossover of two earlier candidates.
struct SeedOrigin {
    std::string generator_id;
    bool operator==(const SeedOrigin&) const = default;
};

struct CrossoverOrigin {
    CandidateId parent_id;
    CandidateId mate_id;
    bool operator==(const CrossoverOrigin&) const = default;
};

using Origin = std::variant<SeedOrigin, CrossoverOrigin>;

/// One text solution plus its provenance and (once evaluated) fitness.
struct Candidate {
    CandidateId id = 0;
    std::string content;
    Origin origin;
    int birth_generation = 0;
    std::optional<double> fitness;
    std::uint64_t content_digest = 0;

    static Candidate seed(CandidateId id, std::string content, std::string generator_id) {
        Candidate c;
        c.id = id;
        c.content_digest = fnv1a64(content);
        c.content = std::move(content);
        c.origin = SeedOrigin{std::move(generator_id)};
        c.birth_generation = 0;
        return c;
    }

    static Candidate crossover(CandidateId id, std::string content, CandidateId parent,
                               CandidateId mate, int birth_generation) {
        Candidate c;
        c.id = id;
        c.content_digest = fnv1a64(content);
        c.content = std::move(content);
        c.origin = CrossoverOrigin{parent, mate};
        c.birth_generation = birth_generation;
        return c;
    }

    bool is_seed() const { return std::holds_alternative<SeedOrigin>(origin); }
};

/// Run hyperparameters. Defaults mirror the reference experiment setup:
/// top-3 parents, three generations, prune below 0.2, stop past 0.95.
struct GAConfig {
    int samples_per_generator = 1;
    int top_k = 3;
    double retire_threshold = 0.2;
    int max_generations = 3;
    double target_fitness = 0.95;
    std::uint64_t rng_seed = 0;
    int max_parallel_calls = 1;
    std::optional<int> population_cap;

    /// Throws Error{config} on an out-of-range field.
    void validate() const;
};

struct Population {
    std::vector<Candidate> members;
    int generation = 0;

    const Candidate* find(CandidateId id) const {
        for (const auto& m : members)
            if (m.id == id) return &m;
        return nullptr;
    }
};

using ScoreMap = std::map<CandidateId, double>;

/// Audit record for one evaluation round. Selection, pairing, child and
/// retirement fields are filled only for rounds that went on to recombine;
/// the round that terminated the run leaves them empty.
struct GenerationRecord {
    int generation = 0;
    ScoreMap scores;
    std::vector<CandidateId> selected_parent_ids;
    std::vector<std::pair<CandidateId, CandidateId>> pairings;  // (parent, mate)
    std::vector<CandidateId> child_ids;
    std::vector<CandidateId> retired_ids;            // scored below threshold
    std::vector<CandidateId> evicted_ids;            // dropped by population cap
    double best_score = 0.0;

    bool operator==(const GenerationRecord&) const = default;
};

enum class Termination {
    target_reached,
    budget_exhausted,
};

const char* to_string(Termination t);

struct RunResult {
    Candidate best;
    Termination termination = Termination::budget_exhausted;
    std::vector<GenerationRecord> history;
    /// Every candidate ever created in the run, in id order (lineage roster).
    std::vector<Candidate> candidates;
    std::int64_t total_generator_calls = 0;
    std::int64_t total_evaluator_calls = 0;
    std::vector<std::string> warnings;
};

}  // namespace multiga
