#include <doctest.h>

#include <cmath>
#include <fstream>

#include "amreval/errors.hpp"
#include "amreval/penman.hpp"
#include "amreval/stats.hpp"
#include "helpers.hpp"

using namespace amreval;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = "/tmp/amreval_stats_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

EvalItem make_item(const std::string& id, const std::string& gold,
                   const std::vector<std::string>& cands,
                   const std::string& sentence = "a test sentence") {
    EvalItem item;
    item.id = id;
    item.sentence = sentence;
    item.gold = parse_penman(gold);
    for (const std::string& c : cands) item.candidates.push_back(parse_penman(c));
    return item;
}

const EmbeddingStore& fallback_store() {
    static EmbeddingStore store = EmbeddingStore::hash_fallback();
    return store;
}

}  // namespace

TEST_CASE("corpus loading aligns by ::id") {
    std::vector<std::string> warnings;
    EvalCorpus corpus = EvalCorpus::load(
        testutil::fixture("flagpair/gold.amr"),
        {{"a", testutil::fixture("flagpair/cand_a.amr")},
         {"b", testutil::fixture("flagpair/cand_b.amr")}},
        &warnings);
    CHECK(corpus.size() == 1);
    CHECK(corpus.parser_ids() == std::vector<std::string>{"a", "b"});
    CHECK(corpus.item(0).id == "flag-1");
    CHECK(corpus.item(0).sentence == "Looking over to the flag.");
    CHECK(corpus.item(0).candidates.size() == 2);
    CHECK(warnings.empty());
}

TEST_CASE("corpus loading falls back to positional alignment with a warning") {
    std::string gold = temp_file("gold.amr", "(a / alpha)\n\n(b / beta)\n");
    std::string cand = temp_file("cand.amr", "(x / alpha)\n\n(y / beta)\n");
    std::vector<std::string> warnings;
    EvalCorpus corpus = EvalCorpus::load(gold, {{"p", cand}}, &warnings);
    CHECK(corpus.size() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("position") != std::string::npos);

    std::string shorter = temp_file("short.amr", "(x / alpha)\n");
    CHECK_THROWS_AS(EvalCorpus::load(gold, {{"p", shorter}}, nullptr), DataError);
}

TEST_CASE("corpus loading rejects id mismatches and duplicates") {
    std::string gold =
        temp_file("gold_ids.amr", "# ::id g1\n(a / alpha)\n\n# ::id g2\n(b / beta)\n");
    std::string wrong =
        temp_file("wrong_ids.amr", "# ::id g1\n(a / alpha)\n\n# ::id g9\n(b / beta)\n");
    CHECK_THROWS_AS(EvalCorpus::load(gold, {{"p", wrong}}, nullptr), DataError);
    std::string dup =
        temp_file("dup_ids.amr", "# ::id g1\n(a / alpha)\n\n# ::id g1\n(b / beta)\n");
    CHECK_THROWS_AS(EvalCorpus::load(dup, {{"p", gold}}, nullptr), DataError);
}

TEST_CASE("judgment TSV loading") {
    std::string prefs = temp_file("prefs.tsv",
                                  "id\tlabel\trationale\n"
                                  "# a comment line\n"
                                  "d1\t1\tfirst graph better\n"
                                  "d2\t-1\n"
                                  "d3\t0\tsame quality\n");
    HumanJudgments j;
    j.load_preferences(prefs);
    CHECK(j.preference("d1") == 1);
    CHECK(j.preference("d2") == -1);
    CHECK(j.preference("d3") == 0);
    CHECK(!j.preference("d4").has_value());
    CHECK(j.rationale("d1") == std::string("first graph better"));

    std::string accept = temp_file("accept.tsv",
                                   "id\tparser\tlabel\n"
                                   "d1\ta\t1\nd1\tb\t0\nd2\ta\t0\nd2\tb\t1\n");
    j.load_acceptability(accept);
    CHECK(j.acceptability("d1", "a") == 1);
    CHECK(j.acceptability("d1", "b") == 0);
    CHECK(!j.acceptability("d3", "a").has_value());

    CHECK_THROWS_AS(
        [&] {
            HumanJudgments bad;
            bad.load_preferences(temp_file("badlabel.tsv", "id\tlabel\nd1\t2\n"));
        }(),
        DataError);
    CHECK_THROWS_AS(
        [&] {
            HumanJudgments bad;
            bad.load_acceptability(temp_file("badaccept.tsv", "h\nd1\ta\t7\n"));
        }(),
        DataError);
    CHECK_THROWS_AS(
        [&] {
            HumanJudgments bad;
            bad.load_preferences(temp_file("empty.tsv", ""));
        }(),
        DataError);
}

TEST_CASE("judgments check against corpus") {
    EvalCorpus corpus = EvalCorpus::assemble(
        {"a"}, {make_item("d1", "(x / alpha)", {"(x / alpha)"})});
    HumanJudgments j;
    j.load_preferences(temp_file("chk.tsv", "id\tlabel\nd1\t1\n"));
    j.check_against(corpus);

    HumanJudgments bad;
    bad.load_preferences(temp_file("chk2.tsv", "id\tlabel\nzz\t1\n"));
    CHECK_THROWS_AS(bad.check_against(corpus), DataError);

    HumanJudgments badp;
    badp.load_acceptability(temp_file("chk3.tsv", "h\nd1\tnope\t1\n"));
    CHECK_THROWS_AS(badp.check_against(corpus), DataError);
}

TEST_CASE("score table is deterministic and order-independent") {
    EvalCorpus corpus = EvalCorpus::load(
        testutil::fixture("micro_macro/gold.amr"),
        {{"a", testutil::fixture("micro_macro/parser_a.amr")},
         {"b", testutil::fixture("micro_macro/parser_b.amr")}});
    EvaluatorConfig cfg;
    cfg.seed = 42;
    MetricEvaluator evaluator(fallback_store(), cfg);
    std::vector<MetricId> metrics(kAllMetrics.begin(), kAllMetrics.end());
    ScoreTable one = ScoreTable::build(evaluator, corpus, metrics, 1);
    ScoreTable four = ScoreTable::build(evaluator, corpus, metrics, 4);
    for (std::size_t m = 0; m < metrics.size(); ++m)
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t i = 0; i < corpus.size(); ++i)
                CHECK(one.similarity(m, p, i) == four.similarity(m, p, i));
}

TEST_CASE("micro pooling matches the pinned arithmetic") {
    // sema components: pair 1 = (1,2,2), pair 2 = (3,4,4).
    EvalCorpus corpus = EvalCorpus::assemble(
        {"p"},
        {make_item("i1", "(a / p :v 2)", {"(a / p :v 1)"}),
         make_item("i2", "(a / p :v 1 :w 2 :x 9)", {"(a / p :v 1 :w 2 :x 3)"})});
    MetricEvaluator evaluator(fallback_store());
    ScoreTable table = ScoreTable::build(evaluator, corpus, {MetricId::Sema}, 1);

    CHECK(table.at(0, 0, 0).triples.matched == doctest::Approx(1.0));
    CHECK(table.at(0, 0, 0).triples.cand_total == doctest::Approx(2.0));
    CHECK(table.at(0, 0, 1).triples.matched == doctest::Approx(3.0));

    CHECK(corpus_score_micro(table, 0, 0) == doctest::Approx(2.0 / 3.0));
    // Macro differs: mean(0.5, 0.75) = 0.625.
    CHECK(corpus_score_macro(table, 0, 0) == doctest::Approx(0.625));
}

TEST_CASE("micro is rejected for metrics without a micro variant") {
    EvalCorpus corpus = EvalCorpus::assemble(
        {"p"}, {make_item("i1", "(a / alpha)", {"(a / alpha)"})});
    MetricEvaluator evaluator(fallback_store());
    ScoreTable table =
        ScoreTable::build(evaluator, corpus,
                          {MetricId::Simple, MetricId::WlkK2, MetricId::WwlkK3e2n}, 1);
    for (std::size_t m = 0; m < 3; ++m)
        CHECK_THROWS_AS(corpus_score_micro(table, m, 0), UsageError);
}

TEST_CASE("micro sembleu pools gram counts") {
    EvalCorpus corpus = EvalCorpus::assemble(
        {"p"}, {make_item("i1", "(a / x)", {"(a / x)"}),
                make_item("i2", "(b / y)", {"(b / z)"})});
    MetricEvaluator evaluator(fallback_store());
    ScoreTable table = ScoreTable::build(evaluator, corpus, {MetricId::SembleuK2}, 1);
    // Pooled order-1 counts: matched 1, cand 2, ref 2; order 2 empty on both
    // sides. Geometric mean with weight 1/2 gives sqrt(1/2); no brevity hit.
    CHECK(corpus_score_micro(table, 0, 0) == doctest::Approx(std::sqrt(0.5)));

    EvalCorpus single = EvalCorpus::assemble(
        {"p"}, {make_item("i1", "(s / sing-01 :ARG0 (b / bird))",
                          {"(s / sing-01 :ARG0 (b / crow))"})});
    ScoreTable ts = ScoreTable::build(evaluator, single, {MetricId::SembleuK2}, 1);
    CHECK(corpus_score_micro(ts, 0, 0) == doctest::Approx(ts.similarity(0, 0, 0)));

    // Single-pair corpora: micro equals macro within 1e-12 for every
    // micro-capable metric.
    std::vector<MetricId> micro_capable{MetricId::Smatch, MetricId::S2match,
                                        MetricId::Sema, MetricId::SembleuK2,
                                        MetricId::SembleuK3};
    ScoreTable tall = ScoreTable::build(evaluator, single, micro_capable, 1);
    for (std::size_t m = 0; m < micro_capable.size(); ++m)
        CHECK(std::abs(corpus_score_micro(tall, m, 0) - corpus_score_macro(tall, m, 0)) <
              1e-12);
}

TEST_CASE("micro/macro orderings flip on the divergence fixture") {
    EvalCorpus corpus = EvalCorpus::load(
        testutil::fixture("micro_macro/gold.amr"),
        {{"a", testutil::fixture("micro_macro/parser_a.amr")},
         {"b", testutil::fixture("micro_macro/parser_b.amr")}});
    MetricEvaluator evaluator(fallback_store());
    ScoreTable table = ScoreTable::build(evaluator, corpus, {MetricId::Smatch}, 0);
    double micro_a = corpus_score_micro(table, 0, 0);
    double micro_b = corpus_score_micro(table, 0, 1);
    double macro_a = corpus_score_macro(table, 0, 0);
    double macro_b = corpus_score_macro(table, 0, 1);
    CHECK(micro_a > micro_b);  // the long entity-heavy item dominates micro
    CHECK(macro_a < macro_b);  // the short item counts equally under macro
}

TEST_CASE("preference counts split ties and conserve n") {
    EvalCorpus corpus = EvalCorpus::assemble(
        {"a", "b"},
        {// item 1: a exact, b wrong -> strict win for a
         make_item("i1", "(s / sing-01 :ARG0 (b / bird))",
                   {"(s / sing-01 :ARG0 (b / bird))", "(q / quiet)"}),
         // item 2: identical candidates -> tie
         make_item("i2", "(g / go-02 :ARG0 (b / boy))",
                   {"(g / go-02 :ARG0 (x / boy))", "(g / go-02 :ARG0 (y / boy))"})});
    MetricEvaluator evaluator(fallback_store());
    ScoreTable table = ScoreTable::build(evaluator, corpus, {MetricId::Smatch}, 1);
    PreferenceCounts counts = preference_counts(table, 0, 0, 1);
    CHECK(counts.wins_a == doctest::Approx(1.5));
    CHECK(counts.wins_b == doctest::Approx(0.5));
    CHECK(counts.strict_a == 1);
    CHECK(counts.ties == 1);
    CHECK(counts.wins_a + counts.wins_b == doctest::Approx(2.0));

    PreferenceCounts self = preference_counts(table, 0, 0, 0);
    CHECK(self.wins_a == doctest::Approx(1.0));
    CHECK(self.wins_b == doctest::Approx(1.0));
    CHECK(self.ties == 2);
}

TEST_CASE("pairwise accuracy") {
    CHECK(pairwise_accuracy({0.2, 0.1, 0.3, 0.5}, {1, 1, 1, 1}) == 1.0);
    CHECK(pairwise_accuracy({0.2, -0.1}, {-1, 1}) == 0.0);
    // 3 agreements, 1 metric tie (counts as failure), 1 disagreement.
    CHECK(pairwise_accuracy({0.5, 0.2, 0.1, 0.0, -0.4}, {1, 1, 1, 1, 1}) ==
          doctest::Approx(0.6));
    CHECK_THROWS_AS(pairwise_accuracy({}, {}), DataError);
    CHECK_THROWS_AS(pairwise_accuracy({0.1}, {0}), UsageError);
}

TEST_CASE("average ranks and acceptability delta") {
    CHECK(average_ranks({0.1, 0.2, 0.9, 1.0}) ==
          std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(average_ranks({0.5, 0.5, 0.5}) == std::vector<double>{2.0, 2.0, 2.0});

    CHECK(acceptability_delta({0.1, 0.2, 0.9, 1.0}, {0, 0, 1, 1}) ==
          doctest::Approx(2.0));
    CHECK(acceptability_delta({0.7, 0.7, 0.7, 0.7}, {0, 1, 0, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(acceptability_delta({0.1, 0.2}, {1, 1}), DataError);

    // Labels as scores (the human anchor): zeros rank {1.5, 1.5}, ones rank
    // {3.5, 3.5}.
    CHECK(acceptability_delta({1, 0, 1, 0}, {1, 0, 1, 0}) == doctest::Approx(2.0));

    // Exchangeable labels: the gap stays inside the noise band.
    Rng rng(7);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 400; ++i) {
        scores.push_back(rng.next_double());
        labels.push_back(static_cast<int>(rng.next_below(2)));
    }
    CHECK(std::abs(acceptability_delta(scores, labels)) < 40.0);
}

TEST_CASE("spearman") {
    CHECK(*spearman({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0));
    CHECK(*spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(*spearman({1, 2, 3}, {std::exp(1.0), std::exp(2.0), std::exp(3.0)}) ==
          doctest::Approx(1.0));
    CHECK(!spearman({1, 1, 1}, {1, 2, 3}).has_value());
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2}), UsageError);
}

TEST_CASE("spearman matrix structure") {
    EvalCorpus corpus = EvalCorpus::assemble(
        {"p"},
        {make_item("i1", "(s / sing-01 :ARG0 (b / bird))",
                   {"(s / sing-01 :ARG0 (b / bird))"}),
         make_item("i2", "(g / go-02 :ARG0 (b / boy))", {"(g / go-01 :ARG0 (b / boy))"}),
         make_item("i3", "(t / thing)", {"(q / quiet)"}),
         make_item("i4", "(l / look-over-06 :ARG1 (f / flag))",
                   {"(l / look-01 :ARG1 (f / flag))"})});
    MetricEvaluator evaluator(fallback_store());
    std::vector<MetricId> ids{MetricId::Smatch, MetricId::S2match, MetricId::Simple};
    ScoreTable table = ScoreTable::build(evaluator, corpus, ids, 1);
    auto matrix = spearman_matrix(table);
    REQUIRE(matrix.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(*matrix[i][i] == doctest::Approx(1.0));
        for (std::size_t j = 0; j < 3; ++j) {
            REQUIRE(matrix[i][j].has_value() == matrix[j][i].has_value());
            if (matrix[i][j])
                CHECK(*matrix[i][j] == doctest::Approx(*matrix[j][i]));
        }
    }
}

TEST_CASE("binomial test") {
    // Two-sided exact p for 113 wins of 200.
    CHECK(binomial_test(113, 200) == doctest::Approx(0.0768376).epsilon(1e-5));
    CHECK(binomial_test(113, 200) > 0.05);  // not significant two-sided
    CHECK(binomial_test(10, 10) == doctest::Approx(0.001953125));
    CHECK(binomial_test(100, 200) == doctest::Approx(1.0));
    CHECK(binomial_test(0, 10) == doctest::Approx(0.001953125));
    CHECK_THROWS_AS(binomial_test(1, 0), UsageError);
    CHECK_THROWS_AS(binomial_test(5, 4), UsageError);
}

TEST_CASE("bootstrap confidence intervals") {
    SUBCASE("constant data, mean statistic -> zero width") {
        std::vector<double> data(50, 3.25);
        auto stat = [&](const std::vector<std::size_t>& idx) {
            double s = 0.0;
            for (std::size_t i : idx) s += data[i];
            return s / static_cast<double>(idx.size());
        };
        auto [lo, hi] = bootstrap_ci(stat, data.size(), 500, 0.95, 1);
        CHECK(lo == doctest::Approx(3.25));
        CHECK(hi == doctest::Approx(3.25));
    }
    SUBCASE("deterministic for a fixed seed") {
        std::vector<double> data;
        Rng rng(3);
        for (int i = 0; i < 100; ++i) data.push_back(rng.next_double());
        auto stat = [&](const std::vector<std::size_t>& idx) {
            double s = 0.0;
            for (std::size_t i : idx) s += data[i];
            return s / static_cast<double>(idx.size());
        };
        auto a = bootstrap_ci(stat, data.size(), 300, 0.95, 99);
        auto b = bootstrap_ci(stat, data.size(), 300, 0.95, 99);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
        auto c = bootstrap_ci(stat, data.size(), 300, 0.95, 100);
        CHECK((c.first != a.first || c.second != a.second));
    }
    SUBCASE("PA = 0.7 with n = 200 excludes 0.5 at the expected width") {
        // 140 agreements, 60 disagreements.
        std::vector<double> deltas;
        std::vector<int> signs;
        for (int i = 0; i < 200; ++i) {
            deltas.push_back(i % 10 < 7 ? 0.3 : -0.3);
            signs.push_back(1);
        }
        auto stat = [&](const std::vector<std::size_t>& idx) {
            std::size_t hits = 0;
            for (std::size_t i : idx)
                if (deltas[i] * signs[i] > 0) ++hits;
            return static_cast<double>(hits) / static_cast<double>(idx.size());
        };
        auto [lo, hi] = bootstrap_ci(stat, deltas.size(), 1000, 0.95, 7);
        CHECK(lo > 0.5);
        double half_width = (hi - lo) / 2.0;
        CHECK(half_width > 0.05);
        CHECK(half_width < 0.09);  // normal approx: 1.96*sqrt(.7*.3/200) = 0.064
    }
}

TEST_CASE("length buckets") {
    auto buckets = length_buckets({"a b c", std::string(60, 'x') + " ", "one two three"},
                                  {1.0, 0.0, 1.0}, 55);
    // "x...x" is a single 1-token word; lengths: 3, 1, 3.
    REQUIRE(buckets.size() == 2);
    CHECK(buckets[0].bucket == 1);
    CHECK(buckets[1].bucket == 3);
    CHECK(buckets[1].count == 2);

    std::string long_sentence;
    for (int i = 0; i < 60; ++i) long_sentence += "tok ";
    auto capped = length_buckets({"a b c", long_sentence}, {0.25, 0.75}, 55);
    REQUIRE(capped.size() == 2);
    CHECK(capped[0].bucket == 3);
    CHECK(capped[1].bucket == 55);  // pooled into the cap bucket
    CHECK(capped[1].mean == doctest::Approx(0.75));

    // Acceptability labels aggregate to the acceptance ratio.
    auto ratio = length_buckets({"a a", "a a", "a a", "a a", "a a"},
                                {1.0, 1.0, 0.0, 1.0, 0.0}, 55);
    REQUIRE(ratio.size() == 1);
    CHECK(ratio[0].mean == doctest::Approx(0.6));

    auto uniform = length_buckets({"a", "b b", "c c c"}, {0.4, 0.4, 0.4}, 55);
    for (const auto& b : uniform) CHECK(b.mean == doctest::Approx(0.4));
    std::size_t total = 0;
    for (const auto& b : uniform) total += b.count;
    CHECK(total == 3);
}

TEST_CASE("rank statistics are invariant under strictly increasing transforms") {
    EvalCorpus corpus = EvalCorpus::load(
        testutil::fixture("micro_macro/gold.amr"),
        {{"a", testutil::fixture("micro_macro/parser_a.amr")},
         {"b", testutil::fixture("micro_macro/parser_b.amr")}});
    MetricEvaluator evaluator(fallback_store());
    std::vector<MetricId> metrics(kAllMetrics.begin(), kAllMetrics.end());
    ScoreTable table = ScoreTable::build(evaluator, corpus, metrics, 1);
    ScoreTable warped = table.transformed([](double v) { return std::exp(v); });

    HumanJudgments j;
    j.load_preferences(temp_file("ri_prefs.tsv", "id\tlabel\nmm-1\t1\nmm-2\t-1\n"));
    j.load_acceptability(temp_file("ri_accept.tsv",
                                   "id\tparser\tlabel\n"
                                   "mm-1\ta\t1\nmm-1\tb\t0\nmm-2\ta\t0\nmm-2\tb\t1\n"));

    for (std::size_t m = 0; m < metrics.size(); ++m) {
        PreferenceCounts p1 = preference_counts(table, m, 0, 1);
        PreferenceCounts p2 = preference_counts(warped, m, 0, 1);
        CHECK(p1.wins_a == p2.wins_a);
        CHECK(p1.wins_b == p2.wins_b);
        CHECK(pairwise_accuracy(table, m, 0, 1, j) ==
              pairwise_accuracy(warped, m, 0, 1, j));
        CHECK(acceptability_delta(table, m, j) == acceptability_delta(warped, m, j));
    }
    auto m1 = spearman_matrix(table);
    auto m2 = spearman_matrix(warped);
    for (std::size_t i = 0; i < m1.size(); ++i)
        for (std::size_t k = 0; k < m1.size(); ++k) {
            REQUIRE(m1[i][k].has_value() == m2[i][k].has_value());
            if (m1[i][k]) CHECK(*m1[i][k] == *m2[i][k]);
        }
}
