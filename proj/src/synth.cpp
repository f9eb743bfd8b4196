#include "hswlm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace hswlm {

void SynthSpec::validate() const {
  if (fanouts.empty()) throw std::invalid_argument("fanouts must be nonempty");
  for (int f : fanouts)
    if (f < 1) throw std::invalid_argument("every fanout must be at least 1");
  if (planted_per_entity < 1 || general_terms < 1 || docs_per_leaf < 1 ||
      doc_length < 1)
    throw std::invalid_argument("all synthetic counts must be at least 1");
  if (layer_mix.size() != fanouts.size() + 1)
    throw std::invalid_argument("layer_mix needs one proportion per layer (" +
                                std::to_string(fanouts.size() + 1) + ")");
  double sum = 0.0;
  for (double m : layer_mix) {
    if (m < 0.0) throw std::invalid_argument("mix proportions must be >= 0");
    sum += m;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("mix proportions must sum to 1, got " +
                                std::to_string(sum));
}

namespace {

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

std::string layer_prefix(std::size_t layer, std::size_t depth) {
  if (depth == 3) {
    switch (layer) {
      case 1:
        return "status";
      case 2:
        return "party";
      case 3:
        return "member";
    }
  }
  return "layer" + std::to_string(layer) + "n";
}

std::vector<std::string> make_terms(const std::string& owner, int count) {
  int width = std::max(2, static_cast<int>(std::to_string(count - 1).size()));
  std::vector<std::string> terms;
  terms.reserve(count);
  for (int i = 0; i < count; ++i)
    terms.push_back(owner + "_t" + padded(i, width));
  return terms;
}

}  // namespace

SynthCorpus synth_corpus(const SynthSpec& spec) {
  spec.validate();
  const std::size_t depth = spec.fanouts.size();

  // Entity ids per layer; layer 0 is the root alone. Indices are global
  // within a layer so ids stay stable when parents are swapped.
  std::vector<std::vector<std::string>> layers(depth + 1);
  layers[0].push_back("parliament");
  for (std::size_t l = 1; l <= depth; ++l) {
    int count = 1;
    for (std::size_t k = 0; k < l; ++k) count *= spec.fanouts[k];
    int width = std::max(1, static_cast<int>(std::to_string(count - 1).size()));
    for (int i = 0; i < count; ++i)
      layers[l].push_back(layer_prefix(l, depth) + padded(i, width));
  }

  std::map<std::string, std::vector<std::string>> planted;
  planted.emplace("parliament", make_terms("general", spec.general_terms));
  for (std::size_t l = 1; l <= depth; ++l)
    for (const auto& id : layers[l])
      planted.emplace(id, make_terms(id, spec.planted_per_entity));

  // Period B rotates the party layer one status over; every deeper link
  // stays put, so parties keep their members.
  auto build_hierarchy = [&](bool swapped) {
    std::vector<Entity> entities;
    Entity root;
    root.id = "parliament";
    entities.push_back(root);
    for (std::size_t l = 1; l <= depth; ++l) {
      int parent_count = static_cast<int>(layers[l - 1].size());
      for (std::size_t i = 0; i < layers[l].size(); ++i) {
        int parent_idx = static_cast<int>(i) / spec.fanouts[l - 1];
        if (l == 2 && swapped)
          parent_idx = (parent_idx + 1) % parent_count;
        Entity e;
        e.id = layers[l][i];
        e.parent = layers[l - 1][parent_idx];
        entities.push_back(std::move(e));
      }
    }
    return Hierarchy::build(std::move(entities));
  };

  // With a single layer below the root there is nothing to swap.
  Hierarchy hier_a = build_hierarchy(false);
  Hierarchy hier_b = build_hierarchy(depth >= 2);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto sample_period = [&](const Hierarchy& h) {
    std::vector<Document> docs;
    for (const auto& leaf : h.bfs_order()) {
      if (!h.is_leaf(leaf)) continue;
      // Ancestor chain top-down, aligned with layer_mix.
      std::vector<const std::vector<std::string>*> chain(depth + 1);
      chain[depth] = &planted.at(leaf);
      for (int l = 1; l <= static_cast<int>(depth); ++l)
        chain[depth - l] = &planted.at(h.ancestor_at(leaf, l));

      // The leaf's own terms lead its first documents so that every planted
      // term is guaranteed to occur in the corpus.
      std::deque<std::string> forced(planted.at(leaf).begin(),
                                     planted.at(leaf).end());

      for (int d = 0; d < spec.docs_per_leaf; ++d) {
        Document doc;
        doc.id = leaf + "_d" + padded(d, 2);
        doc.owner = leaf;
        doc.tokens.reserve(spec.doc_length);
        while (static_cast<int>(doc.tokens.size()) < spec.doc_length &&
               !forced.empty()) {
          doc.tokens.push_back(std::move(forced.front()));
          forced.pop_front();
        }
        while (static_cast<int>(doc.tokens.size()) < spec.doc_length) {
          double u = unit(rng);
          std::size_t layer = 0;
          double acc = 0.0;
          for (; layer + 1 < spec.layer_mix.size(); ++layer) {
            acc += spec.layer_mix[layer];
            if (u < acc) break;
          }
          const auto& terms = *chain[layer];
          std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
          doc.tokens.push_back(terms[pick(rng)]);
        }
        docs.push_back(std::move(doc));
      }
    }
    return docs;
  };

  std::vector<Document> docs_a = sample_period(hier_a);
  std::vector<Document> docs_b = sample_period(hier_b);

  SynthCorpus result{Corpus(hier_a, std::move(docs_a)),
                     Corpus(hier_b, std::move(docs_b)), std::move(planted),
                     {}};
  for (const auto& id : result.period_a.hierarchy().bfs_order())
    if (result.period_a.hierarchy().is_leaf(id) &&
        result.period_a.hierarchy().depth(id) >= 1)
      result.labels.emplace(
          id, result.period_a.hierarchy().ancestor_at(id, 1));
  return result;
}

}  // namespace hswlm
