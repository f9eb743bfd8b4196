#ifndef HSWLM_HSWLM_HPP
#define HSWLM_HSWLM_HPP

#include <string>
#include <utility>
#include <vector>

#include "hswlm/corpus.hpp"
#include "hswlm/langmodel.hpp"
#include "hswlm/parsimony.hpp"

namespace hswlm {

struct EstimationConfig {
  ParsimonyConfig parsimony;
  // Largest per-entity L1 change over a full specification+generalization
  // iteration that still counts as converged.
  double outer_tolerance = 1e-4;
  // Hierarchies a few layers deep keep reshuffling the upper levels for
  // roughly a dozen iterations before settling, so the cap leaves headroom.
  int max_outer_iters = 25;
  // When a pass prunes a model to nothing: keep the single strongest term
  // instead of failing.
  bool floor_all_pruned = false;
  // Entities on one level are independent; >1 spreads them across threads.
  int threads = 1;

  void validate() const;
};

struct TraceRecord {
  int iteration;
  std::string stage;  // "specification" or "generalization"
  std::string entity;
  double l1_change;      // against the entity's model at the start of the pass
  std::size_t support_size;
};

struct EstimationTrace {
  std::vector<TraceRecord> records;
};

// MLE models for every entity in the hierarchy. Throws EstimationError naming
// any entity with no pooled tokens beneath it.
ModelSet initialize(const Corpus& corpus);

// Top-down pass: each entity is parsimonized against its ancestors' current
// models, farthest (the root) first, direct parent last. The root itself is
// untouched. Ancestors are always processed before their descendants, so the
// backgrounds have already been specified within this pass.
ModelSet specification_pass(const ModelSet& models, const Hierarchy& hierarchy,
                            const EstimationConfig& config,
                            EstimationTrace* trace = nullptr,
                            int iteration = 0);

// Bottom-up pass: each entity is parsimonized against the combined models of
// its descendants, farthest level first, direct children last. Leaves are
// untouched. Descendants are always processed before their ancestors.
ModelSet generalization_pass(const ModelSet& models, const Hierarchy& hierarchy,
                             const EstimationConfig& config,
                             EstimationTrace* trace = nullptr,
                             int iteration = 0);

// Full estimation: MLE initialization, then alternating specification and
// generalization until the largest per-entity L1 change over an iteration
// falls below outer_tolerance (or the iteration cap is reached, which is not
// an error).
std::pair<ModelSet, EstimationTrace> estimate_hswlm(
    const Corpus& corpus, const EstimationConfig& config);

}  // namespace hswlm

#endif  // HSWLM_HSWLM_HPP
