#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hswlm/hswlm.hpp"
#include "hswlm/synth.hpp"
#include "oracles.hpp"

using namespace hswlm;

namespace {

Corpus tiny_tree() {
  Hierarchy h = parse_hierarchy(R"({
    "id":"r","children":[
      {"id":"s1","children":[{"id":"m1"},{"id":"m2"}]},
      {"id":"s2","children":[{"id":"m3"}]}
    ]})");
  return ingest_documents({{"d1", "m1", "shared alpha alpha"},
                           {"d2", "m2", "shared beta"},
                           {"d3", "m3", "shared gamma gamma gamma"}},
                          h);
}

SynthSpec small_synth() {
  // Sized so every layer's planted signal stands clear of sampling noise:
  // a member draws ~17 occurrences of each of its own terms against ~4.5
  // for a typical general term.
  SynthSpec spec;
  spec.fanouts = {2, 2, 3};
  spec.docs_per_leaf = 15;
  spec.planted_per_entity = 8;
  spec.general_terms = 30;
  spec.doc_length = 60;
  spec.layer_mix = {0.15, 0.55, 0.15, 0.15};
  spec.seed = 99;
  return spec;
}

}  // namespace

TEST_CASE("initialize: every entity gets its pooled MLE model") {
  Corpus c = tiny_tree();
  ModelSet ms = initialize(c);
  CHECK(ms.models.size() == 6);
  CHECK(ms.models.at("r").support_size() == c.vocabulary().size());
  // parent of two leaves pools both
  CHECK(ms.models.at("s1").prob("alpha") == doctest::Approx(0.4));
  CHECK(ms.models.at("s1").prob("shared") == doctest::Approx(0.4));
  CHECK(ms.models.at("s1").prob("beta") == doctest::Approx(0.2));
  CHECK(ms.models.at("m3").prob("gamma") == doctest::Approx(0.75));

  SUBCASE("single-node hierarchy") {
    Hierarchy h = parse_hierarchy(R"({"id":"solo"})");
    Corpus solo = ingest_documents({{"d", "solo", "a b"}}, h);
    ModelSet m = initialize(solo);
    CHECK(m.models.at("solo").prob("a") == 0.5);
  }
  SUBCASE("entity without tokens fails by name") {
    Hierarchy h = parse_hierarchy(R"({"id":"r","children":[{"id":"a"},{"id":"b"}]})");
    Corpus gap = ingest_documents({{"d", "a", "x"}}, h);
    try {
      initialize(gap);
      FAIL("expected EstimationError");
    } catch (const EstimationError& err) {
      CHECK(err.entity() == "b");
    }
  }
  SUBCASE("every model normalized on a synthetic 4-layer tree") {
    SynthCorpus synth = synth_corpus(small_synth());
    ModelSet ms4 = initialize(synth.period_a);
    CHECK(ms4.models.size() == synth.period_a.hierarchy().size());
    for (const auto& [id, model] : ms4.models) {
      double sum = 0.0;
      for (const auto& [term, p] : model.entries()) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(ms4.models.at("parliament").support_size() ==
          synth.period_a.vocabulary().size());
  }
}

TEST_CASE("specification_pass wires ancestors farthest-first") {
  Corpus c = tiny_tree();
  ModelSet init = initialize(c);
  EstimationConfig cfg;

  ModelSet spec = specification_pass(init, c.hierarchy(), cfg);

  // Root untouched.
  CHECK(spec.models.at("r") == init.models.at("r"));

  // Depth-1 entities: parsimonized once, against the root MLE.
  SparseLM s1_expected =
      parsimonize(init.models.at("s1"), init.models.at("r"), cfg.parsimony);
  CHECK(spec.models.at("s1") == s1_expected);

  // Depth-2 entities: first the root, then the already-specified parent.
  SparseLM m1_step1 =
      parsimonize(init.models.at("m1"), init.models.at("r"), cfg.parsimony);
  SparseLM m1_expected = parsimonize(m1_step1, s1_expected, cfg.parsimony);
  CHECK(spec.models.at("m1") == m1_expected);

  SUBCASE("root-only hierarchy is unchanged") {
    Hierarchy h = parse_hierarchy(R"({"id":"solo"})");
    Corpus solo = ingest_documents({{"d", "solo", "a b"}}, h);
    ModelSet ms = initialize(solo);
    CHECK(specification_pass(ms, h, cfg) == ms);
  }
}

TEST_CASE("generalization_pass wires combined descendants bottom-up") {
  Corpus c = tiny_tree();
  ModelSet init = initialize(c);
  EstimationConfig cfg;

  ModelSet spec = specification_pass(init, c.hierarchy(), cfg);
  ModelSet gen = generalization_pass(spec, c.hierarchy(), cfg);

  // Leaves untouched by generalization.
  CHECK(gen.models.at("m1") == spec.models.at("m1"));
  CHECK(gen.models.at("m3") == spec.models.at("m3"));

  // Height-1 entity: parsimonized against its combined (already final)
  // children.
  SparseLM s1_bg =
      combine_backgrounds({spec.models.at("m1"), spec.models.at("m2")});
  SparseLM s1_expected =
      parsimonize(spec.models.at("s1"), s1_bg, cfg.parsimony);
  CHECK(gen.models.at("s1") == s1_expected);

  // Height-2 root: members first (l=2), then the generalized statuses (l=1).
  SparseLM root_bg2 = combine_backgrounds(
      {spec.models.at("m1"), spec.models.at("m2"), spec.models.at("m3")});
  SparseLM root_step1 =
      parsimonize(spec.models.at("r"), root_bg2, cfg.parsimony);
  SparseLM s2_expected = parsimonize(
      spec.models.at("s2"),
      combine_backgrounds(std::vector<SparseLM>{spec.models.at("m3")}),
      cfg.parsimony);
  SparseLM root_expected = parsimonize(
      root_step1, combine_backgrounds({s1_expected, s2_expected}),
      cfg.parsimony);
  CHECK(gen.models.at("r") == root_expected);
}

TEST_CASE("estimate_hswlm: degenerate shapes") {
  EstimationConfig cfg;

  SUBCASE("single node converges to its MLE in one iteration") {
    Hierarchy h = parse_hierarchy(R"({"id":"solo"})");
    Corpus solo = ingest_documents({{"d", "solo", "a b b c"}}, h);
    auto [ms, trace] = estimate_hswlm(solo, cfg);
    CHECK(ms.iteration == 1);
    CHECK(ms.models.at("solo") == mle_entity(solo, "solo"));
  }
  SUBCASE("parent with a single leaf child is a fixed point") {
    Hierarchy h = parse_hierarchy(R"({"id":"r","children":[{"id":"m"}]})");
    Corpus c = ingest_documents({{"d", "m", "a a b c"}}, h);
    auto [ms, trace] = estimate_hswlm(c, cfg);
    CHECK(ms.iteration == 1);
    // parent model == child model == MLE; parsimonizing a model against
    // itself leaves it alone, so nothing moves
    CHECK(l1_distance(ms.models.at("r"), mle_entity(c, "r")) <= 1e-12);
    CHECK(l1_distance(ms.models.at("m"), ms.models.at("r")) <= 1e-12);
  }
}

TEST_CASE("estimate_hswlm: trace records one row per entity, stage, iteration") {
  Corpus c = tiny_tree();
  EstimationConfig cfg;
  auto [ms, trace] = estimate_hswlm(c, cfg);

  std::set<std::tuple<int, std::string, std::string>> keys;
  int max_iter = 0;
  for (const auto& rec : trace.records) {
    CHECK(keys.emplace(rec.iteration, rec.stage, rec.entity).second);
    CHECK((rec.stage == "specification" || rec.stage == "generalization"));
    max_iter = std::max(max_iter, rec.iteration);
  }
  CHECK(max_iter == ms.iteration);
  // specification touches all but the root; generalization all but leaves
  std::size_t per_iter = (c.hierarchy().size() - 1) + 3;
  CHECK(trace.records.size() == per_iter * ms.iteration);
}

TEST_CASE("estimate_hswlm: planted corpus recovery and separability") {
  SynthCorpus synth = synth_corpus(small_synth());
  const Corpus& corpus = synth.period_a;
  EstimationConfig cfg;
  auto [ms, trace] = estimate_hswlm(corpus, cfg);
  ModelSet mle = initialize(corpus);

  SUBCASE("support shrinkage: HSWLM support within MLE support") {
    for (const auto& [id, model] : ms.models) {
      const SparseLM& base = mle.models.at(id);
      CHECK(model.support_size() <= base.support_size());
      for (const auto& [term, p] : model.entries())
        CHECK(base.prob(term) > 0.0);
    }
  }

  SUBCASE("planted terms dominate every non-root model") {
    for (const auto& [id, model] : ms.models) {
      if (id == "parliament") continue;
      const auto& own = synth.planted.at(id);
      std::set<std::string> own_set(own.begin(), own.end());
      std::size_t hits = 0;
      for (const auto& [term, p] : top_k(model, own.size()))
        if (own_set.count(term)) ++hits;
      CHECK(hits >= own.size() * 9 / 10);
    }
  }

  SUBCASE("horizontal separability per sibling group") {
    const Hierarchy& h = corpus.hierarchy();
    for (const auto& id : h.bfs_order()) {
      const auto& children = h.entity(id).children;
      if (children.size() < 2) continue;
      double hs = 0.0, base = 0.0;
      int pairs = 0;
      for (std::size_t i = 0; i < children.size(); ++i)
        for (std::size_t j = i + 1; j < children.size(); ++j) {
          hs += js_divergence(ms.models.at(children[i]),
                              ms.models.at(children[j]));
          base += js_divergence(mle.models.at(children[i]),
                                mle.models.at(children[j]));
          ++pairs;
        }
      CHECK(hs / pairs > base / pairs);
    }
  }

  SUBCASE("vertical separability per child-parent edge") {
    const Hierarchy& h = corpus.hierarchy();
    for (const auto& id : h.bfs_order()) {
      if (id == h.root()) continue;
      const std::string& parent = *h.entity(id).parent;
      double hs = js_divergence(ms.models.at(id), ms.models.at(parent));
      double base = js_divergence(mle.models.at(id), mle.models.at(parent));
      CHECK(hs > base);
    }
  }

  SUBCASE("idempotence at the fixed point") {
    if (ms.iteration < cfg.max_outer_iters) {
      ModelSet again = specification_pass(ms, corpus.hierarchy(), cfg);
      again = generalization_pass(again, corpus.hierarchy(), cfg);
      for (const auto& [id, model] : again.models)
        CHECK(l1_distance(model, ms.models.at(id)) < cfg.outer_tolerance);
    }
  }

  SUBCASE("deterministic across reruns and thread counts") {
    auto [rerun, trace2] = estimate_hswlm(corpus, cfg);
    CHECK(rerun == ms);
    EstimationConfig threaded = cfg;
    threaded.threads = 4;
    auto [parallel, trace3] = estimate_hswlm(corpus, threaded);
    CHECK(parallel == ms);
  }
}

TEST_CASE("estimate_hswlm: ragged trees and random shapes hold the invariants") {
  // Leaves at different depths; a chain of single children; a deep branch
  // next to a shallow one.
  Hierarchy h = parse_hierarchy(R"({
    "id":"r","children":[
      {"id":"shallow"},
      {"id":"mid","children":[
        {"id":"leafish"},
        {"id":"deep","children":[{"id":"d1"},{"id":"d2"}]}
      ]},
      {"id":"chain","children":[{"id":"c1","children":[{"id":"c2"}]}]}
    ]})");
  std::mt19937_64 rng(31);
  std::vector<DocRecord> records;
  int doc_id = 0;
  for (const auto& id : h.bfs_order()) {
    if (!h.is_leaf(id)) continue;
    for (int d = 0; d < 3; ++d) {
      std::string text = id + "_own";
      for (int t = 0; t < 30; ++t)
        text += rng() % 2 ? " shared" + std::to_string(rng() % 5)
                          : " " + id + "_w" + std::to_string(rng() % 6);
      records.push_back({"doc" + std::to_string(doc_id++), id, text});
    }
  }
  Corpus corpus = ingest_documents(records, h);
  EstimationConfig cfg;
  auto [ms, trace] = estimate_hswlm(corpus, cfg);
  ModelSet mle = initialize(corpus);

  CHECK(ms.models.size() == h.size());
  for (const auto& [id, model] : ms.models) {
    double sum = 0.0;
    for (const auto& [term, p] : model.entries()) {
      CHECK(mle.models.at(id).prob(term) > 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model.support_size() <= mle.models.at(id).support_size());
  }
  // own-vocabulary terms survive in every leaf
  for (const auto& id : h.bfs_order())
    if (h.is_leaf(id)) CHECK(ms.models.at(id).prob(id + "_own") > 0.0);
}

TEST_CASE("estimate_hswlm: all-pruned abort versus floor") {
  // One leaf whose document repeats a single term; parent == child model, and
  // an absurd pruning threshold wipes every term out.
  Hierarchy h = parse_hierarchy(R"({"id":"r","children":[{"id":"m"}]})");
  Corpus c = ingest_documents({{"d", "m", "a b c d"}}, h);
  EstimationConfig cfg;
  cfg.parsimony.prune_epsilon = 0.9;

  try {
    estimate_hswlm(c, cfg);
    FAIL("expected EstimationError");
  } catch (const EstimationError& err) {
    CHECK(err.kind() == EstimationError::Kind::AllPruned);
    CHECK(err.entity() == "m");
  }

  cfg.floor_all_pruned = true;
  auto [ms, trace] = estimate_hswlm(c, cfg);
  CHECK(ms.models.at("m").support_size() == 1);
  CHECK(ms.models.at("m").prob("a") == 1.0);  // tie broken by term order
}

TEST_CASE("estimation config validation") {
  EstimationConfig cfg;
  cfg.outer_tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_outer_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.threads = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
