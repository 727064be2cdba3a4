#include "multiga/example_store.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "multiga/errors.hpp"

namespace multiga {

ExampleStore::ExampleStore(std::shared_ptr<Embedder> embedder)
    : embedder_(std::move(embedder)), embedder_id_(embedder_->id()) {}

ExampleStore ExampleStore::load(const std::string& path, std::shared_ptr<Embedder> embedder) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open example store: " + path);
    ExampleStore store(std::move(embedder));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object())
            throw Error(ErrorKind::schema,
                        path + ":" + std::to_string(line_no) + ": malformed store entry");
        if (!row.contains("text") || !row["text"].is_string())
            throw Error(ErrorKind::schema,
                        path + ":" + std::to_string(line_no) + ": entry needs a 'text' string");
        const std::string label = row.value("label", "");
        ExampleLabel kind;
        if (label == "positive") {
            kind = ExampleLabel::positive;
        } else if (label == "negative") {
            kind = ExampleLabel::negative;
        } else {
            throw Error(ErrorKind::schema, path + ":" + std::to_string(line_no) +
                                               ": label must be 'positive' or 'negative'");
        }
        std::map<std::string, std::string> meta;
        if (row.contains("meta") && row["meta"].is_object()) {
            for (auto& [k, v] : row["meta"].items())
                if (v.is_string()) meta[k] = v.get<std::string>();
        }
        store.add(row["text"].get<std::string>(), kind, std::move(meta));
    }
    return store;
}

void ExampleStore::add(std::string text, ExampleLabel label,
                       std::map<std::string, std::string> meta) {
    ExampleEntry entry;
    entry.vector = embedder_->embed(text);  // normalized by the embedder
    entry.text = std::move(text);
    entry.label = label;
    entry.meta = std::move(meta);
    entries_.push_back(std::move(entry));
}

std::size_t ExampleStore::count(ExampleLabel label) const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(),
                      [label](const ExampleEntry& e) { return e.label == label; }));
}

RetrievedExamples ExampleStore::retrieve(std::string_view query, int n_pos, int n_neg) const {
    RetrievedExamples out;
    if (n_pos <= 0 && n_neg <= 0) return out;

    const std::vector<double> q = embedder_->embed(query);

    auto top_for = [&](ExampleLabel label, int n, const char* label_name) {
        std::vector<ExampleEntry> picked;
        if (n <= 0) return picked;
        // (similarity, insertion index); ties keep insertion order.
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].label == label) ranked.emplace_back(cosine(q, entries_[i].vector), i);
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        if (ranked.size() < static_cast<std::size_t>(n)) {
            out.warnings.push_back(std::string("requested ") + std::to_string(n) + " " +
                                   label_name + " examples, store holds only " +
                                   std::to_string(ranked.size()));
        }
        const std::size_t take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(n));
        picked.reserve(take);
        for (std::size_t i = 0; i < take; ++i) picked.push_back(entries_[ranked[i].second]);
        return picked;
    };

    out.positives = top_for(ExampleLabel::positive, n_pos, "positive");
    out.negatives = top_for(ExampleLabel::negative, n_neg, "negative");
    return out;
}

std::string format_examples(const std::vector<ExampleEntry>& entries) {
    std::string out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += "\n\n";
        const auto& e = entries[i];
        auto q = e.meta.find("q");
        auto a = e.meta.find("a");
        if (q != e.meta.end() && a != e.meta.end()) {
            out += "Q: " + q->second + "\nA: " + a->second;
        } else {
            out += e.text;
        }
    }
    return out;
}

}  // namespace multiga
