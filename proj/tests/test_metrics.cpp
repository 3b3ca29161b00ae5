#include <doctest.h>

#include <cmath>

#include "amreval/errors.hpp"
#include "amreval/metrics.hpp"
#include "amreval/penman.hpp"
#include "helpers.hpp"

using namespace amreval;

namespace {

const char* kFlagRef = "(l / look-over-06 :ARG1 (f / flag))";
const char* kFlagCandA = "(l / look-01 :direction (o / over) :destination (f / flag))";
const char* kFlagCandB = "(z0 / look-01 :ARG2 (z1 / flag) :direction (z2 / over))";

EmbeddingStore tiny_store() {
    return EmbeddingStore::load_file(testutil::fixture("embeddings/tiny_glove.txt"));
}

}  // namespace

TEST_CASE("metric names round-trip") {
    for (MetricId id : kAllMetrics) {
        auto back = metric_from_name(metric_name(id));
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK(!metric_from_name("wwlk").has_value());
    CHECK(metric_supports_micro(MetricId::Smatch));
    CHECK(metric_supports_micro(MetricId::SembleuK3));
    CHECK(!metric_supports_micro(MetricId::Simple));
    CHECK(!metric_supports_micro(MetricId::WlkK2));
    CHECK(!metric_supports_micro(MetricId::WwlkK3e2n));
}

TEST_CASE("simple jaccard") {
    AmrGraph ref = parse_penman(kFlagRef);
    AmrGraph cand = parse_penman(kFlagCandA);
    CHECK(simple_jaccard(ref, ref).similarity == 1.0);
    // Bags: {look-over-06, flag, ARG1} vs {look-01, over, flag, direction,
    // destination}; intersection 1, union 7.
    CHECK(simple_jaccard(cand, ref).similarity == doctest::Approx(1.0 / 7.0));
    AmrGraph disjoint = parse_penman("(q / totally :unrelated (z / different))");
    CHECK(simple_jaccard(disjoint, ref).similarity == 0.0);
}

TEST_CASE("sema") {
    AmrGraph ref = parse_penman(kFlagRef);
    AmrGraph cand = parse_penman(kFlagCandA);
    CHECK(sema(ref, ref).similarity == 1.0);

    // Enumeration: candidate edge triples {(look-01,direction,over),
    // (look-01,destination,flag)} match none of {(look-over-06,ARG1,flag)};
    // unary concepts match only "flag". matched=1, cand=5, ref=3.
    MetricScore s = sema(cand, ref);
    CHECK(s.triples.matched == doctest::Approx(1.0));
    CHECK(s.triples.cand_total == doctest::Approx(5.0));
    CHECK(s.triples.ref_total == doctest::Approx(3.0));
    CHECK(s.similarity == doctest::Approx(0.25));

    MetricScore bare = sema(cand, ref, false);
    CHECK(bare.triples.matched == 0.0);
    CHECK(bare.similarity == 0.0);

    // Variables removed: renaming cannot matter.
    AmrGraph renamed = parse_penman("(a / look-over-06 :ARG1 (b / flag))");
    CHECK(sema(renamed, ref).similarity == 1.0);
}

TEST_CASE("sembleu") {
    AmrGraph ref = parse_penman(kFlagRef);
    CHECK(sembleu(ref, ref, 2).similarity == 1.0);
    CHECK(sembleu(ref, ref, 3).similarity == 1.0);

    AmrGraph disjoint = parse_penman("(q / qqq :r (z / zzz))");
    CHECK(sembleu(disjoint, ref, 2).similarity == 0.0);

    // path a->b vs path a->c: unigram precision 1/2, bigram precision 0.
    AmrGraph pa = parse_penman("(x / a :r (y / b))");
    AmrGraph pb = parse_penman("(x / a :r (y / c))");
    MetricScore s = sembleu(pa, pb, 2);
    REQUIRE(s.grams.size() == 2);
    CHECK(s.grams[0].matched == doctest::Approx(1.0));
    CHECK(s.grams[0].cand_total == doctest::Approx(2.0));
    CHECK(s.grams[1].matched == doctest::Approx(0.0));
    CHECK(s.similarity == 0.0);

    // Smoothing turns the hard zero into a small positive score.
    CHECK(sembleu(pa, pb, 2, true).similarity > 0.0);

    // Brevity penalty: candidate strictly smaller than reference.
    AmrGraph small = parse_penman("(x / a)");
    AmrGraph big = parse_penman("(x / a :r (y / a :r (z / a)))");
    // order1: cand {a}, ref {a,a,a}: p1 = 1; order2: cand empty, ref 2 grams -> p2 = 0.
    CHECK(sembleu(small, big, 2).similarity == 0.0);
    // With k=1 only the brevity penalty bites: c=1, r=3 -> exp(1-3) = e^-2.
    CHECK(sembleu(small, big, 1).similarity == doctest::Approx(std::exp(-2.0)));

    // Directional by construction.
    CHECK(sembleu(small, big, 1).similarity != sembleu(big, small, 1).similarity);
}

TEST_CASE("smatch reproduces the pinned flag-pair scores") {
    AmrGraph ref = parse_penman(kFlagRef);
    AmrGraph ca = parse_penman(kFlagCandA);
    AmrGraph cb = parse_penman(kFlagCandB);
    auto [sa, aa] = smatch_align(ca, ref);
    auto [sb, ab] = smatch_align(cb, ref);
    CHECK(sa.similarity == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sb.similarity == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sa.triples.matched == doctest::Approx(1.0));
    CHECK(sa.triples.cand_total == doctest::Approx(6.0));
    CHECK(sa.triples.ref_total == doctest::Approx(4.0));

    auto [self, align] = smatch_align(ref, ref);
    CHECK(self.similarity == 1.0);
    CHECK(align.mapping.at("l") == "l");
    CHECK(align.mapping.at("f") == "f");
}

TEST_CASE("smatch equals the exhaustive oracle on small random pairs") {
    Rng rng(1234);
    int agreements = 0;
    const int kTrials = 150;
    for (int t = 0; t < kTrials; ++t) {
        AmrGraph a = testutil::random_graph(rng);
        AmrGraph b = testutil::random_graph(rng);
        double hill = smatch_align(a, b, 4, rng.next_u64()).first.triples.matched;
        double oracle = testutil::exhaustive_smatch_matched(a, b);
        CHECK(hill <= oracle + 1e-9);  // search can never exceed the optimum
        if (std::abs(hill - oracle) < 1e-9) ++agreements;
    }
    // The acceptance suite runs the full 1000-pair version at >= 99%.
    CHECK(agreements >= kTrials * 99 / 100);
}

TEST_CASE("s2match") {
    EmbeddingStore store = tiny_store();
    AmrGraph ref = parse_penman("(s / see-01 :ARG0 (c / cat))");
    CHECK(s2match_align(ref, ref, store).first.similarity == 1.0);

    // cosine(cat, kitten) = 0.8 >= tau: matched mass = 1 (see) + 0.8
    // (kitten~cat) + 1 (TOP) + 1 (ARG0) = 3.8 of 4 triples each side.
    AmrGraph cand = parse_penman("(s / see-01 :ARG0 (c / kitten))");
    auto [score, align] = s2match_align(cand, ref, store);
    CHECK(score.triples.matched == doctest::Approx(3.8));
    CHECK(score.similarity == doctest::Approx(0.95));

    // Threshold gate: cosine(cat, plant) = 0 < tau, so s2match == smatch.
    AmrGraph plant = parse_penman("(s / see-01 :ARG0 (c / plant))");
    CHECK(s2match_align(plant, ref, store).first.similarity ==
          doctest::Approx(smatch_align(plant, ref).first.similarity));

    // Raising tau above 0.8 closes the graded gate.
    CHECK(s2match_align(cand, ref, store, 0.9).first.similarity ==
          doctest::Approx(smatch_align(cand, ref).first.similarity));
}

TEST_CASE("wlk") {
    AmrGraph ref = parse_penman(kFlagRef);
    CHECK(wlk(ref, ref, 2).similarity == doctest::Approx(1.0).epsilon(1e-12));

    AmrGraph disjoint = parse_penman("(q / qqq :r (z / zzz))");
    CHECK(wlk(disjoint, ref, 2).similarity == 0.0);

    // Star vs path with the same label multiset: equal at k=0, apart at k>=1.
    AmrGraph star = parse_penman("(a / n :r (b / n) :r (c / n))");
    AmrGraph path = parse_penman("(a / n :r (b / n :r (c / n)))");
    CHECK(wlk(star, path, 0).similarity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wlk(star, path, 1).similarity < 1.0);
    CHECK(wlk(star, path, 2).similarity < wlk(star, path, 0).similarity);
}

TEST_CASE("wwlk closed forms") {
    EmbeddingStore store = tiny_store();
    double sigma2 = store.oov_variance();
    std::size_t dim = store.dimension();

    SUBCASE("identity") {
        AmrGraph g = parse_penman("(s / sing-01 :ARG0 (b / bird))");
        CHECK(wwlk(g, g, store, 2).similarity == 1.0);
        CHECK(wwlk(g, g, store, 2).raw_distance == 0.0);
    }
    SUBCASE("single nodes, known concepts: exp(-d*sqrt(k+1))") {
        AmrGraph a = parse_penman("(a / east)");
        AmrGraph b = parse_penman("(b / north)");
        double d = std::sqrt(2.0);  // distance between the two unit vectors
        for (int k : {0, 1, 2}) {
            MetricScore s = wwlk(a, b, store, k);
            CHECK(s.raw_distance ==
                  doctest::Approx(d * std::sqrt(static_cast<double>(k + 1))));
            CHECK(s.similarity ==
                  doctest::Approx(std::exp(-d * std::sqrt(static_cast<double>(k + 1)))));
        }
    }
    SUBCASE("single nodes, distinct OOV concepts: sqrt(2*dim*sigma2*(k+1))") {
        AmrGraph a = parse_penman("(a / zork)");
        AmrGraph b = parse_penman("(b / gluon)");
        for (int k : {0, 2}) {
            double expect =
                std::sqrt(2.0 * static_cast<double>(dim) * sigma2 * (k + 1));
            CHECK(wwlk(a, b, store, k).raw_distance == doctest::Approx(expect));
        }
    }
    SUBCASE("same OOV concept twice is a perfect match") {
        AmrGraph a = parse_penman("(a / zork)");
        AmrGraph b = parse_penman("(b / zork)");
        CHECK(wwlk(a, b, store, 2).similarity == 1.0);
    }
}

TEST_CASE("wwlk-k3e2n") {
    EmbeddingStore store = tiny_store();
    AmrGraph ref = parse_penman(kFlagRef);
    CHECK(wwlk_k3e2n(ref, ref, store).similarity == 1.0);

    // Edge labels now carry point mass: a pair differing only in one edge
    // label scores lower under the transform than plain wwlk-k2 scores it.
    AmrGraph ea = parse_penman("(a / boy :ARG0 (b / want))");
    AmrGraph eb = parse_penman("(a / boy :ARG1 (b / want))");
    double plain = wwlk(ea, eb, store, 2).similarity;
    double e2n = wwlk_k3e2n(ea, eb, store).similarity;
    CHECK(plain == 1.0);  // plain wwlk ignores edge labels entirely
    CHECK(e2n < plain);

    // Both flag-pair candidates keep graded similarity well above their
    // smatch 0.2.
    AmrGraph ca = parse_penman(kFlagCandA);
    AmrGraph cb = parse_penman(kFlagCandB);
    CHECK(wwlk_k3e2n(ca, ref, store).similarity > 0.2);
    CHECK(wwlk_k3e2n(cb, ref, store).similarity > 0.2);
    CHECK(wwlk_k3e2n(ca, ref, store).similarity > 0.0);
}

TEST_CASE("identity suite: every metric is 1.0 on (g, g) and renamed copies") {
    EmbeddingStore store = EmbeddingStore::hash_fallback();
    MetricEvaluator evaluator(store);
    auto graphs = read_amr_file(testutil::fixture("identity/graphs.amr"));
    REQUIRE(graphs.size() >= 30);
    Rng rng(5);
    for (const AmrGraph& g : graphs) {
        AmrGraph copy = testutil::renamed_copy(g, rng);
        for (MetricId id : kAllMetrics) {
            CAPTURE(metric_name(id));
            CAPTURE(g.id());
            CHECK(evaluator.evaluate(id, g, g).similarity ==
                  doctest::Approx(1.0).epsilon(1e-9));
            CHECK(evaluator.evaluate(id, copy, g).similarity ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("variable renaming never changes any metric") {
    EmbeddingStore store = EmbeddingStore::hash_fallback();
    MetricEvaluator evaluator(store);
    Rng rng(77);
    testutil::GraphGenOptions opt;
    opt.max_vars = 5;
    for (int trial = 0; trial < 25; ++trial) {
        AmrGraph a = testutil::random_graph(rng, opt);
        AmrGraph b = testutil::random_graph(rng, opt);
        AmrGraph ra = testutil::renamed_copy(a, rng, "x");
        AmrGraph rb = testutil::renamed_copy(b, rng, "y");
        for (MetricId id : kAllMetrics) {
            CAPTURE(metric_name(id));
            double base = evaluator.evaluate(id, a, b).similarity;
            CHECK(evaluator.evaluate(id, ra, b).similarity ==
                  doctest::Approx(base).epsilon(1e-9));
            CHECK(evaluator.evaluate(id, a, rb).similarity ==
                  doctest::Approx(base).epsilon(1e-9));
            CHECK(evaluator.evaluate(id, ra, rb).similarity ==
                  doctest::Approx(base).epsilon(1e-9));
        }
    }
}

TEST_CASE("symmetry audit and range") {
    EmbeddingStore store = EmbeddingStore::hash_fallback();
    MetricEvaluator evaluator(store);
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        AmrGraph a = testutil::random_graph(rng);
        AmrGraph b = testutil::random_graph(rng);
        for (MetricId id : kAllMetrics) {
            double ab = evaluator.evaluate(id, a, b).similarity;
            double ba = evaluator.evaluate(id, b, a).similarity;
            CAPTURE(metric_name(id));
            CHECK(ab >= 0.0);
            CHECK(ab <= 1.0);
            if (id != MetricId::SembleuK2 && id != MetricId::SembleuK3)
                CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
        }
    }
}
