#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "multiga/embedder.hpp"
#include "multiga/errors.hpp"
#include "multiga/example_store.hpp"
#include "support/helpers.hpp"

using namespace multiga;

TEST_CASE("embedding is deterministic and unit-length") {
    HashedBowEmbedder embedder;
    auto a = embedder.embed("The quick brown fox");
    auto b = embedder.embed("The quick brown fox");
    CHECK(a == b);
    CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.size() == HashedBowEmbedder::kDimension);
}

TEST_CASE("tokenization lowercases, so case differences vanish") {
    HashedBowEmbedder embedder;
    CHECK(embedder.embed("Hello WORLD") == embedder.embed("hello world"));
}

TEST_CASE("disjoint vocabularies embed orthogonally") {
    HashedBowEmbedder embedder;
    // Chosen so the two token sets land in disjoint hash buckets; the CHECKs
    // below pin that assumption.
    std::set<std::size_t> left, right;
    for (const char* w : {"alpha", "beta", "gamma"}) left.insert(HashedBowEmbedder::bucket_of(w));
    for (const char* w : {"delta", "epsilon", "zeta"})
        right.insert(HashedBowEmbedder::bucket_of(w));
    for (auto bucket : left) CHECK(!right.count(bucket));

    auto a = embedder.embed("alpha beta gamma");
    auto b = embedder.embed("delta epsilon zeta");
    CHECK(cosine(a, b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("empty or token-free text cannot be embedded") {
    HashedBowEmbedder embedder;
    CHECK_THROWS_AS(embedder.embed(""), Error);
    CHECK_THROWS_AS(embedder.embed("!!! ---"), Error);
}

TEST_CASE("a store with one positive entry returns it") {
    ExampleStore store;
    store.add("select name from hero", ExampleLabel::positive);
    RetrievedExamples got = store.retrieve("hero names", 1, 0);
    REQUIRE(got.positives.size() == 1);
    CHECK(got.positives[0].text == "select name from hero");
    CHECK(got.negatives.empty());
}

TEST_CASE("a query identical to a stored entry ranks it first") {
    ExampleStore store;
    store.add("how many heroes are faster than sound", ExampleLabel::positive);
    store.add("list publisher names", ExampleLabel::positive);
    store.add("count heroes by eye color", ExampleLabel::positive);
    RetrievedExamples got = store.retrieve("list publisher names", 2, 0);
    REQUIRE(got.positives.size() == 2);
    CHECK(got.positives[0].text == "list publisher names");
}

TEST_CASE("requesting zero examples yields empty lists and empty formatting") {
    ExampleStore store;
    store.add("anything", ExampleLabel::positive);
    RetrievedExamples got = store.retrieve("anything", 0, 0);
    CHECK(got.positives.empty());
    CHECK(got.negatives.empty());
    CHECK(format_examples(got.positives) == "");
}

TEST_CASE("shortfall returns everything available with a warning") {
    ExampleStore store;
    store.add("one", ExampleLabel::positive);
    store.add("bad one", ExampleLabel::negative);
    RetrievedExamples got = store.retrieve("one", 3, 5);
    CHECK(got.positives.size() == 1);
    CHECK(got.negatives.size() == 1);
    CHECK(got.warnings.size() == 2);
}

TEST_CASE("formatting renders q/a metadata as question-answer blocks") {
    ExampleStore store;
    store.add("q and a", ExampleLabel::positive, {{"q", "How many?"}, {"a", "SELECT COUNT(*)"}});
    store.add("bare text", ExampleLabel::positive);
    RetrievedExamples got = store.retrieve("q and a", 2, 0);
    REQUIRE(got.positives.size() == 2);
    const std::string text = format_examples(got.positives);
    CHECK(text.find("Q: How many?") != std::string::npos);
    CHECK(text.find("A: SELECT COUNT(*)") != std::string::npos);
    CHECK(text.find("bare text") != std::string::npos);
    CHECK(text.find("\n\n") != std::string::npos);
}

TEST_CASE("store files load from JSON lines and reject bad labels") {
    testing::TempDir dir;
    testing::write_file(dir.file("store.jsonl"),
                        R"({"text": "good example", "label": "positive"})"
                        "\n"
                        R"({"text": "bad example", "label": "negative", "meta": {"q": "x", "a": "y"}})"
                        "\n");
    ExampleStore store = ExampleStore::load(dir.file("store.jsonl"));
    CHECK(store.count(ExampleLabel::positive) == 1);
    CHECK(store.count(ExampleLabel::negative) == 1);

    testing::write_file(dir.file("bad.jsonl"), R"({"text": "x", "label": "meh"})"
                                               "\n");
    CHECK_THROWS_AS(ExampleStore::load(dir.file("bad.jsonl")), Error);
}

// Independent oracle: full-scan cosine ranking with repeated max-selection,
// ties resolved toward the earlier insertion index.
namespace {
std::vector<std::string> oracle_rank(const ExampleStore& store, const std::string& query,
                                     ExampleLabel label, int n) {
    HashedBowEmbedder embedder;
    auto q = embedder.embed(query);
    struct Scored {
        double sim;
        std::size_t index;
        const ExampleEntry* entry;
    };
    std::vector<Scored> pool;
    const auto& entries = store.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].label != label) continue;
        double dot = 0.0;
        for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * entries[i].vector[d];
        pool.push_back(Scored{dot, i, &entries[i]});
    }
    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < n && !pool.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i) {
            if (pool[i].sim > pool[best].sim ||
                (pool[i].sim == pool[best].sim && pool[i].index < pool[best].index))
                best = i;
        }
        out.push_back(pool[best].entry->text);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return out;
}

std::string random_text(std::mt19937_64& rng) {
    static const char* vocab[] = {"hero",  "speed",  "query", "join",  "table", "plan",
                                  "meet",  "travel", "count", "name",  "color", "fast",
                                  "slow",  "group",  "order", "where", "sum",   "min",
                                  "max",   "select", "from",  "limit", "time",  "city"};
    std::string text;
    const int words = 1 + static_cast<int>(rng() % 8);
    for (int w = 0; w < words; ++w) {
        if (w) text += " ";
        text += vocab[rng() % 24];
    }
    return text;
}
}  // namespace

TEST_CASE("retrieval matches the brute-force oracle on random stores") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 40; ++round) {
        ExampleStore store;
        const int entries = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < entries; ++i)
            store.add(random_text(rng),
                      rng() % 2 ? ExampleLabel::positive : ExampleLabel::negative);
        const std::string query = random_text(rng);
        const int n_pos = static_cast<int>(rng() % 6);
        const int n_neg = static_cast<int>(rng() % 6);

        RetrievedExamples got = store.retrieve(query, n_pos, n_neg);
        auto texts = [](const std::vector<ExampleEntry>& entries) {
            std::vector<std::string> out;
            for (const auto& e : entries) out.push_back(e.text);
            return out;
        };
        CHECK(texts(got.positives) == oracle_rank(store, query, ExampleLabel::positive, n_pos));
        CHECK(texts(got.negatives) == oracle_rank(store, query, ExampleLabel::negative, n_neg));
    }
}
