#ifndef HSWLM_PARSIMONY_HPP
#define HSWLM_PARSIMONY_HPP

#include <vector>

#include "hswlm/langmodel.hpp"

namespace hswlm {

struct ParsimonyConfig {
  // Mixing weight of the specific model; lower values parsimonize harder.
  // 0.1 is the classic parsimonious-language-model setting and is strong
  // enough that background-explained terms reach zero within one call, which
  // the multi-pass estimation relies on.
  double lambda = 0.1;
  // EM stops once the L1 change of an iteration drops below this.
  double em_tolerance = 1e-6;
  int max_em_iters = 50;
  // Entries below this are dropped once, after EM convergence.
  double prune_epsilon = 1e-5;

  void validate() const;
};

// Collapses one or more background models into a single background
// distribution: score(t) = sum_i p_i(t) * prod_{j!=i} (1 - p_j(t)),
// normalized. A term scores high when it is prominent in one background but
// not the others. A single background is returned unchanged.
SparseLM combine_backgrounds(const std::vector<const SparseLM*>& models);
SparseLM combine_backgrounds(const std::vector<SparseLM>& models);

// Re-estimates `target` against `background` with EM, then prunes:
//   E: e_t = target(t) * lambda*w(t) / (lambda*w(t) + (1-lambda)*background(t))
//   M: w(t) = e_t / sum e
// starting from w = target. The result's support is a subset of the target's;
// background terms are never introduced. Throws EstimationError (AllPruned)
// when nothing survives pruning.
SparseLM parsimonize(const SparseLM& target, const SparseLM& background,
                     const ParsimonyConfig& config);

}  // namespace hswlm

#endif  // HSWLM_PARSIMONY_HPP
