#include <algorithm>

#include "doctest.h"
#include "m2_oracle.hpp"
#include "semkit/metrics.hpp"
#include "test_util.hpp"

using namespace semkit;
using testutil::all_paths;
using testutil::oracle_sentence;
using testutil::OracleCounts;

namespace {

std::vector<std::string> rand_toks(Rng& rng, std::size_t max_len) {
  return testutil::random_tokens(rng, max_len, 4);
}

}  // namespace

TEST_SUITE("fbeta") {
  TEST_CASE("published precision recall pairs") {
    // two correction systems reported at P=54.3 R=15.4 and P=53.8 R=38.3
    CHECK(100.0 * f_beta(0.543, 0.154, 0.5) == doctest::Approx(36.07).epsilon(0.001));
    CHECK(100.0 * f_beta(0.538, 0.383, 0.5) ==
          doctest::Approx(49.7715).epsilon(0.0001));
  }

  TEST_CASE("identities and edge cases") {
    CHECK(f_beta(1.0, 1.0, 0.5) == 1.0);
    CHECK(f_beta(0.0, 0.0, 0.5) == 0.0);
    CHECK(f_beta(0.0, 1.0, 1.0) == 0.0);
    CHECK(f_beta(0.5, 0.5, 1.0) == doctest::Approx(0.5));
    // beta -> 0 weights precision only
    CHECK(f_beta(0.8, 0.2, 1e-9) == doctest::Approx(0.8).epsilon(1e-6));
  }

  TEST_CASE("rejects out-of-domain arguments") {
    CHECK_THROWS_AS(f_beta(-0.1, 0.5, 0.5), ValidationError);
    CHECK_THROWS_AS(f_beta(0.5, 1.1, 0.5), ValidationError);
    CHECK_THROWS_AS(f_beta(0.5, 0.5, -1.0), ValidationError);
  }
}

TEST_SUITE("lattice") {
  TEST_CASE("identical sequences yield a single all-match path") {
    EditLattice lattice = build_edit_lattice({"a", "b"}, {"a", "b"}, 2);
    auto paths = all_paths(lattice);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].empty());
  }

  TEST_CASE("compound edges respect max_unchanged") {
    // sub ... match ... sub: with max_unchanged >= 1 a compound edge exists
    std::vector<std::string> src = {"a", "k", "c"};
    std::vector<std::string> hyp = {"x", "k", "y"};
    auto wide = all_paths(build_edit_lattice(src, hyp, 1));
    auto narrow = all_paths(build_edit_lattice(src, hyp, 0));
    // the wide lattice contains the single compound edit [0,3) -> x k y
    bool found = false;
    for (const auto& path : wide)
      if (path.size() == 1 && path[0].start == 0 && path[0].end == 3)
        found = true;
    CHECK(found);
    for (const auto& path : narrow)
      for (const Edit& e : path)
        CHECK(!(path.size() == 1 && e.start == 0 && e.end == 3));
  }

  TEST_CASE("every path applies back to the hypothesis") {
    Rng rng(41);
    for (int it = 0; it < 100; ++it) {
      auto src = rand_toks(rng, 6);
      auto hyp = rand_toks(rng, 6);
      EditLattice lattice = build_edit_lattice(src, hyp, 2);
      for (const auto& path : all_paths(lattice))
        CHECK(testutil::apply_path(src, path) == hyp);
    }
  }
}

TEST_SUITE("m2score") {
  TEST_CASE("single-reference hand example") {
    // src: a b c ; hyp: a x c ; gold: the same substitution
    M2Record rec;
    rec.source_tokens = {"a", "b", "c"};
    rec.references.push_back({{{1, 2, {"x"}, "confusion"}}, 0});
    ScoreReport report =
        m2_score({{"a", "b", "c"}}, {{"a", "x", "c"}}, {rec}, {});
    CHECK(report.tp == 1);
    CHECK(report.fp == 0);
    CHECK(report.fn == 0);
    CHECK(report.f == doctest::Approx(1.0));
  }

  TEST_CASE("unmatched hypothesis edit counts against precision") {
    M2Record rec;
    rec.source_tokens = {"a", "b", "c"};
    rec.references.push_back({{{1, 2, {"x"}, ""}}, 0});
    ScoreReport report =
        m2_score({{"a", "b", "c"}}, {{"a", "b", "z"}}, {rec},
                 {});  // system edited the wrong token
    CHECK(report.tp == 0);
    CHECK(report.fp == 1);
    CHECK(report.fn == 1);
    CHECK(report.precision == 0.0);
    CHECK(report.recall == 0.0);
  }

  TEST_CASE("empty hypothesis gives precision one") {
    M2Record rec;
    rec.source_tokens = {"a", "b"};
    rec.references.push_back({{{0, 1, {"x"}, ""}}, 0});
    ScoreReport report = m2_score({{"a", "b"}}, {{"a", "b"}}, {rec}, {});
    CHECK(report.tp == 0);
    CHECK(report.fp == 0);
    CHECK(report.fn == 1);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 0.0);
  }

  TEST_CASE("reference choice maximizes F with annotator tie-break") {
    // annotator 1 matches the hypothesis, annotator 0 does not
    M2Record rec;
    rec.source_tokens = {"a", "b"};
    rec.references.push_back({{{0, 1, {"q"}, ""}}, 0});
    rec.references.push_back({{{0, 1, {"z"}, ""}}, 1});
    ScoreReport report = m2_score({{"a", "b"}}, {{"z", "b"}}, {rec}, {});
    CHECK(report.tp == 1);
    CHECK(report.fp == 0);
    CHECK(report.fn == 0);
    REQUIRE(report.per_sentence.size() == 1);
    CHECK(report.per_sentence[0].chosen_annotator == 1);

    // perfectly tied references resolve to the smaller id
    M2Record tie;
    tie.source_tokens = {"a", "b"};
    tie.references.push_back({{{0, 1, {"z"}, ""}}, 3});
    tie.references.push_back({{{0, 1, {"z"}, ""}}, 1});
    ScoreReport tied = m2_score({{"a", "b"}}, {{"z", "b"}}, {tie}, {});
    CHECK(tied.per_sentence[0].chosen_annotator == 1);
  }

  TEST_CASE("noop reference wins when the system stays silent") {
    M2Record one;
    one.source_tokens = {"a", "b"};
    one.references.push_back({{{0, 1, {"z"}, ""}}, 0});
    one.references.push_back({{}, 1});
    // hypothesis leaves the sentence alone: ref0 scores 0 tp 1 fn,
    // ref1 scores the empty set perfectly.
    ScoreReport cumulative =
        m2_score({{"a", "b"}}, {{"a", "b"}}, {one}, {});
    CHECK(cumulative.tp == 0);
    CHECK(cumulative.fp == 0);
    CHECK(cumulative.fn == 0);
    CHECK(cumulative.f == 1.0);
    CHECK(cumulative.per_sentence[0].chosen_annotator == 1);
  }

  TEST_CASE("matches the exhaustive oracle on randomized instances") {
    Rng rng(42);
    M2ScoreOptions options;
    for (int it = 0; it < 200; ++it) {
      std::vector<std::string> src = rand_toks(rng, 8);
      std::vector<std::string> hyp = rand_toks(rng, 8);
      M2Record rec;
      rec.source_tokens = src;
      std::size_t refs = 1 + rng.below(2);
      for (std::size_t a = 0; a < refs; ++a) {
        std::vector<std::string> target = rand_toks(rng, 8);
        EditSet gold = extract_edits(src, target);
        while (gold.edits.size() > 4) gold.edits.pop_back();
        gold.annotator = static_cast<int>(a);
        rec.references.push_back(std::move(gold));
      }
      ScoreReport got = m2_score({src}, {hyp}, {rec}, options);
      OracleCounts want =
          oracle_sentence(src, hyp, rec, options.beta, options.max_unchanged);
      CHECK(got.tp == want.tp);
      CHECK(got.fp == want.fp);
      CHECK(got.fn == want.fn);
    }
  }

  TEST_CASE("validates input shape") {
    M2Record rec;
    rec.source_tokens = {"a"};
    rec.references.push_back({{}, 0});
    CHECK_THROWS_AS(m2_score({{"a"}, {"b"}}, {{"a"}}, {rec}, {}),
                    ValidationError);  // count mismatch
    CHECK_THROWS_AS(m2_score({{"x"}}, {{"x"}}, {rec}, {}),
                    ValidationError);  // wrong source tokens
  }
}

TEST_SUITE("clsmetrics") {
  TEST_CASE("incorrect is the positive class") {
    std::vector<std::string> pred = {"incorrect", "incorrect", "correct",
                                     "correct"};
    std::vector<std::string> gold = {"incorrect", "correct", "incorrect",
                                     "correct"};
    ClsReport r = cls_metrics(pred, gold);
    CHECK(r.tp == 1);
    CHECK(r.fp == 1);
    CHECK(r.fn == 1);
    CHECK(r.tn == 1);
    CHECK(r.precision == doctest::Approx(0.5));
    CHECK(r.recall == doctest::Approx(0.5));
    CHECK(r.f1 == doctest::Approx(0.5));
  }

  TEST_CASE("empty-denominator conventions are zero") {
    std::vector<std::string> allc = {"correct", "correct"};
    ClsReport r = cls_metrics(allc, allc);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
  }

  TEST_CASE("rejects foreign labels and length mismatch") {
    CHECK_THROWS_AS(cls_metrics({"bad"}, {"correct"}), ValidationError);
    CHECK_THROWS_AS(cls_metrics({"correct"}, {"oops"}), ValidationError);
    CHECK_THROWS_AS(cls_metrics({"correct"}, {"correct", "correct"}),
                    ValidationError);
  }

  TEST_CASE("per-type recall counts detected gold errors") {
    std::vector<std::string> gold = {"incorrect", "incorrect", "incorrect",
                                     "correct"};
    std::vector<std::string> pred = {"incorrect", "correct", "incorrect",
                                     "correct"};
    std::vector<std::optional<std::string>> types = {
        std::string("missing"), std::string("missing"),
        std::string("illogic"), std::nullopt};
    ClsReport r = per_type_recall(pred, gold, types);
    CHECK(r.per_type_recall.at("missing") == doctest::Approx(0.5));
    CHECK(r.per_type_recall.at("illogic") == doctest::Approx(1.0));
    CHECK(r.per_type_support.at("missing") == 2);
    CHECK(r.per_type_support.at("illogic") == 1);
    CHECK(r.per_type_recall.count("redundant") == 0);  // zero support: absent
    // the headline counts still come along
    CHECK(r.tp == 2);
    CHECK(r.fn == 1);
  }

  TEST_CASE("the seven error types are published") {
    CHECK(kErrorTypes ==
          std::vector<std::string>{"word order", "missing", "collocation",
                                   "redundant", "confusion", "fuzziness",
                                   "illogic"});
  }
}
