#include "hswlm/langmodel.hpp"

#include <algorithm>
#include <cmath>

namespace hswlm {

namespace {

// Sums entries in stored order; every accumulation over a model's support in
// this file uses the same order, which is what makes the exact-sum identities
// below hold.
double entry_sum(const std::vector<SparseLM::Entry>& entries) {
  double s = 0.0;
  for (const auto& [term, v] : entries) s += v;
  return s;
}

}  // namespace

SparseLM SparseLM::from_weights(std::vector<Entry> weights,
                                const std::string& context) {
  std::erase_if(weights, [](const Entry& e) {
    return !(e.second > 0.0) || !std::isfinite(e.second);
  });
  if (weights.empty())
    throw EstimationError(EstimationError::Kind::EmptyModel, context,
                          context.empty()
                              ? "model has no positive-probability terms"
                              : "model for '" + context +
                                    "' has no positive-probability terms");
  std::sort(weights.begin(), weights.end());

  double sum = entry_sum(weights);
  for (auto& [term, v] : weights) v /= sum;

  // Fold the normalization residual into the largest entry. This usually
  // lands the stored sum on exactly 1.0; when rounding oscillates it stays
  // within an ulp or two, well inside the 1e-9 contract.
  auto largest = std::max_element(
      weights.begin(), weights.end(),
      [](const Entry& a, const Entry& b) { return a.second < b.second; });
  for (int pass = 0; pass < 8; ++pass) {
    double s = entry_sum(weights);
    if (s == 1.0) break;
    largest->second += 1.0 - s;
  }

  SparseLM lm;
  lm.entries_ = std::move(weights);
  return lm;
}

SparseLM SparseLM::from_counts(
    const std::vector<std::pair<std::string, std::int64_t>>& counts,
    const std::string& context) {
  std::vector<Entry> weights;
  weights.reserve(counts.size());
  for (const auto& [term, c] : counts)
    if (c > 0) weights.emplace_back(term, static_cast<double>(c));
  return from_weights(std::move(weights), context);
}

double SparseLM::prob(std::string_view term) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), term,
      [](const Entry& e, std::string_view t) { return e.first < t; });
  if (it == entries_.end() || it->first != term) return 0.0;
  return it->second;
}

SparseLM mle_entity(const Corpus& corpus, const std::string& entity_id) {
  corpus.hierarchy().entity(entity_id);  // validate id
  return SparseLM::from_counts(corpus.pooled_counts(entity_id), entity_id);
}

SparseLM mixture(const SparseLM& p, const SparseLM& q, double lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("mixture lambda must be in (0,1), got " +
                                std::to_string(lambda));
  const auto& a = p.entries();
  const auto& b = q.entries();
  std::vector<SparseLM::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.emplace_back(a[i].first, lambda * a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, (1.0 - lambda) * b[j].second);
      ++j;
    } else {
      out.emplace_back(a[i].first,
                       lambda * a[i].second + (1.0 - lambda) * b[j].second);
      ++i;
      ++j;
    }
  }
  return SparseLM::from_weights(std::move(out));
}

double js_divergence(const SparseLM& p, const SparseLM& q) {
  // KL(p||m) and KL(q||m) are accumulated separately, each over its own
  // support in term order; for disjoint supports each accumulator then folds
  // to exactly 1 bit.
  double klp = 0.0, klq = 0.0;
  const auto& a = p.entries();
  const auto& b = q.entries();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      klp += a[i].second * std::log2(a[i].second / (0.5 * a[i].second));
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      klq += b[j].second * std::log2(b[j].second / (0.5 * b[j].second));
      ++j;
    } else {
      double m = 0.5 * (a[i].second + b[j].second);
      klp += a[i].second * std::log2(a[i].second / m);
      klq += b[j].second * std::log2(b[j].second / m);
      ++i;
      ++j;
    }
  }
  double jsd = 0.5 * klp + 0.5 * klq;
  return std::clamp(jsd, 0.0, 1.0);
}

double l1_distance(const SparseLM& p, const SparseLM& q) {
  // Separate accumulators for the p-only, q-only, and shared parts so the
  // disjoint case gives exactly 2.0.
  double only_p = 0.0, only_q = 0.0, shared = 0.0;
  const auto& a = p.entries();
  const auto& b = q.entries();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      only_p += a[i].second;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      only_q += b[j].second;
      ++j;
    } else {
      shared += std::fabs(a[i].second - b[j].second);
      ++i;
      ++j;
    }
  }
  return only_p + only_q + shared;
}

std::vector<SparseLM::Entry> top_k(const SparseLM& p, std::size_t k) {
  std::vector<SparseLM::Entry> entries = p.entries();
  auto by_prob_desc = [](const SparseLM::Entry& a, const SparseLM::Entry& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  k = std::min(k, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + k, entries.end(),
                    by_prob_desc);
  entries.resize(k);
  return entries;
}

}  // namespace hswlm
