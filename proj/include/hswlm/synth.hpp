#ifndef HSWLM_SYNTH_HPP
#define HSWLM_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hswlm/corpus.hpp"

namespace hswlm {

// Shape of a generated two-period corpus with planted vocabularies. Every
// entity below the root owns a disjoint planted term set; the root owns the
// shared general set. Documents under a leaf mix the planted distributions of
// the leaf and its ancestors according to layer_mix (root layer first).
struct SynthSpec {
  std::vector<int> fanouts{2, 3, 5};  // statuses, parties per status, ...
  int planted_per_entity = 20;
  int general_terms = 100;
  int docs_per_leaf = 20;
  int doc_length = 50;
  // Proportion of tokens drawn from each layer's planted set, root first.
  // The status layer dominates: speech is driven by being in government or
  // opposition far more than by party or speaker idiosyncrasies.
  std::vector<double> layer_mix{0.15, 0.65, 0.15, 0.05};
  std::uint64_t seed = 42;

  void validate() const;
};

struct SynthCorpus {
  // period_b re-generates the documents after swapping the parties between
  // the two status branches; party and member vocabularies stay put.
  Corpus period_a;
  Corpus period_b;
  // Entity id -> its planted terms (the root maps to the general set).
  std::map<std::string, std::vector<std::string>> planted;
  // Leaf id -> its class (the ancestor one level above, the "party" layer).
  std::map<std::string, std::string> labels;
};

SynthCorpus synth_corpus(const SynthSpec& spec);

}  // namespace hswlm

#endif  // HSWLM_SYNTH_HPP
