#include "hswlm/parsimony.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace hswlm {

void ParsimonyConfig::validate() const {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("lambda must be in (0,1), got " +
                                std::to_string(lambda));
  if (!(em_tolerance > 0.0))
    throw std::invalid_argument("em_tolerance must be positive");
  if (max_em_iters < 1)
    throw std::invalid_argument("max_em_iters must be at least 1");
  if (prune_epsilon < 0.0)
    throw std::invalid_argument("prune_epsilon must be non-negative");
}

SparseLM combine_backgrounds(const std::vector<const SparseLM*>& models) {
  if (models.empty())
    throw std::invalid_argument("combine_backgrounds: empty background list");
  if (models.size() == 1) return *models.front();

  // Probabilities of each term across the models that contain it; absent
  // models contribute a factor of (1 - 0) = 1 and no summand.
  std::map<std::string, std::vector<double>> by_term;
  for (const SparseLM* m : models)
    for (const auto& [term, p] : m->entries()) by_term[term].push_back(p);

  std::vector<SparseLM::Entry> scores;
  scores.reserve(by_term.size());
  for (const auto& [term, probs] : by_term) {
    int ones = 0;
    for (double p : probs)
      if (p == 1.0) ++ones;
    double score = 0.0;
    if (ones == 0) {
      // prod_j (1-p_j) * sum_i p_i/(1-p_i) regroups the product-sum without
      // an O(n^2) inner loop.
      double prod = 1.0, ratio_sum = 0.0;
      for (double p : probs) {
        prod *= 1.0 - p;
        ratio_sum += p / (1.0 - p);
      }
      score = prod * ratio_sum;
    } else if (ones == 1) {
      double prod = 1.0;
      for (double p : probs)
        if (p != 1.0) prod *= 1.0 - p;
      score = prod;
    }  // two or more certain backgrounds cancel each other: score stays 0
    scores.emplace_back(term, score);
  }

  bool any = false;
  for (const auto& [term, s] : scores)
    if (s > 0.0) any = true;
  if (!any)
    throw EstimationError(
        EstimationError::Kind::DegenerateBackground, "",
        "combined backgrounds assign zero score to every term");
  return SparseLM::from_weights(std::move(scores));
}

SparseLM combine_backgrounds(const std::vector<SparseLM>& models) {
  std::vector<const SparseLM*> ptrs;
  ptrs.reserve(models.size());
  for (const auto& m : models) ptrs.push_back(&m);
  return combine_backgrounds(ptrs);
}

SparseLM parsimonize(const SparseLM& target, const SparseLM& background,
                     const ParsimonyConfig& config) {
  config.validate();
  const double lambda = config.lambda;

  const auto& entries = target.entries();
  const std::size_t n = entries.size();
  std::vector<double> p(n), bg(n), w(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = entries[i].second;
    bg[i] = background.prob(entries[i].first);
    w[i] = p[i];
  }

  for (int iter = 0; iter < config.max_em_iters; ++iter) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double denom = lambda * w[i] + (1.0 - lambda) * bg[i];
      next[i] = denom > 0.0 ? p[i] * (lambda * w[i]) / denom : 0.0;
      sum += next[i];
    }
    if (!(sum > 0.0))
      throw EstimationError(EstimationError::Kind::AllPruned, "",
                            "parsimonization drove every term to zero");
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= sum;
      change += std::fabs(next[i] - w[i]);
      w[i] = next[i];
    }
    if (change < config.em_tolerance) break;
  }

  std::vector<SparseLM::Entry> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] > 0.0 && w[i] >= config.prune_epsilon)
      kept.emplace_back(entries[i].first, w[i]);
  if (kept.empty())
    throw EstimationError(EstimationError::Kind::AllPruned, "",
                          "every term fell below the pruning threshold " +
                              std::to_string(config.prune_epsilon));
  return SparseLM::from_weights(std::move(kept));
}

}  // namespace hswlm
