#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "multiga/embedder.hpp"

namespace multiga {

enum class ExampleLabel { positive, negative };

struct ExampleEntry {
    std::string text;
    ExampleLabel label = ExampleLabel::positive;
    /// Optional structured fields from the store file ("q"/"a" render as
    /// question/answer blocks).
    std::map<std::string, std::string> meta;
    std::vector<double> vector;  // L2-normalized at insertion
};

struct RetrievedExamples {
    std::vector<ExampleEntry> positives;
    std::vector<ExampleEntry> negatives;
    std::vector<std::string> warnings;  // shortfall notes
};

/// Few-shot example store with cosine-similarity retrieval. Entries are
/// embedded and normalized at insertion; the store is immutable afterwards
/// and safe for concurrent reads.
class ExampleStore {
public:
    explicit ExampleStore(std::shared_ptr<Embedder> embedder = default_embedder());

    /// Loads a JSON-lines file, one {text, label, meta?} object per line.
    static ExampleStore load(const std::string& path,
                             std::shared_ptr<Embedder> embedder = default_embedder());

    void add(std::string text, ExampleLabel label,
             std::map<std::string, std::string> meta = {});

    const std::vector<ExampleEntry>& entries() const { return entries_; }
    const std::string& embedder_id() const { return embedder_id_; }
    std::size_t count(ExampleLabel label) const;

    /// Top-n entries per label by cosine similarity to the query, ties
    /// broken by insertion order. Requesting more than the store holds
    /// returns everything available plus a shortfall warning.
    RetrievedExamples retrieve(std::string_view query, int n_pos, int n_neg) const;

private:
    std::shared_ptr<Embedder> embedder_;
    std::string embedder_id_;
    std::vector<ExampleEntry> entries_;
};

/// Renders retrieved entries for the {positive_examples}/{negative_examples}
/// placeholders: "Q: .. / A: .." blocks when the entry has q/a meta, the raw
/// text otherwise, joined by blank lines.
std::string format_examples(const std::vector<ExampleEntry>& entries);

}  // namespace multiga
