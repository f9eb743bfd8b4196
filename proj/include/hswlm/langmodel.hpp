#ifndef HSWLM_LANGMODEL_HPP
#define HSWLM_LANGMODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hswlm/corpus.hpp"
#include "hswlm/errors.hpp"

namespace hswlm {

// Sparse normalized distribution over terms. Entries are strictly positive,
// sorted by term, and sum to 1 within a few ulps (the normalization residual
// is folded back into the largest entry, which usually makes the sum exact).
class SparseLM {
 public:
  using Entry = std::pair<std::string, double>;

  // Keeps positive finite weights, drops the rest, normalizes. Throws
  // EstimationError (EmptyModel) when no positive mass remains; context names
  // the model being built.
  static SparseLM from_weights(std::vector<Entry> weights,
                               const std::string& context = "");
  static SparseLM from_counts(
      const std::vector<std::pair<std::string, std::int64_t>>& counts,
      const std::string& context = "");

  double prob(std::string_view term) const;
  bool contains(std::string_view term) const { return prob(term) > 0.0; }
  std::size_t support_size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const SparseLM&) const = default;

 private:
  SparseLM() = default;
  std::vector<Entry> entries_;  // sorted by term
};

// Pooled maximum-likelihood model of everything under an entity.
SparseLM mle_entity(const Corpus& corpus, const std::string& entity_id);

// lambda*p + (1-lambda)*q over the union of supports; lambda in (0,1).
SparseLM mixture(const SparseLM& p, const SparseLM& q, double lambda);

// Jensen-Shannon divergence in bits: 0 for identical models, exactly 1 for
// disjoint supports.
double js_divergence(const SparseLM& p, const SparseLM& q);

// Sum of absolute probability differences over the union of supports; in
// [0, 2], exactly 2 for disjoint supports.
double l1_distance(const SparseLM& p, const SparseLM& q);

// The k highest-probability entries, descending, ties broken by term order.
std::vector<SparseLM::Entry> top_k(const SparseLM& p, std::size_t k);

// One model per entity; `iteration` counts completed estimation passes.
struct ModelSet {
  std::map<std::string, SparseLM> models;
  int iteration = 0;

  bool operator==(const ModelSet&) const = default;
};

}  // namespace hswlm

#endif  // HSWLM_LANGMODEL_HPP
