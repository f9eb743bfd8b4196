#include "hswlm/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hswlm {

std::string scheme_name(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Tf:
      return "tf";
    case WeightScheme::Ig:
      return "ig";
    case WeightScheme::Hswlm:
      return "hswlm";
  }
  return "?";
}

WeightScheme scheme_from_name(const std::string& name) {
  if (name == "tf") return WeightScheme::Tf;
  if (name == "ig") return WeightScheme::Ig;
  if (name == "hswlm") return WeightScheme::Hswlm;
  throw std::invalid_argument("unknown weighting scheme '" + name + "'");
}

namespace {

double entropy(const std::map<std::string, std::int64_t>& counts,
               std::int64_t total) {
  double h = 0.0;
  for (const auto& [cls, c] : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::map<std::string, double> information_gain_weights(
    const std::vector<LabeledInstance>& instances) {
  std::map<std::string, std::int64_t> class_counts;
  for (const auto& inst : instances) ++class_counts[inst.label];
  if (class_counts.size() < 2)
    throw EvalError("information gain needs at least two classes, got " +
                    std::to_string(class_counts.size()));

  const auto n = static_cast<std::int64_t>(instances.size());
  double h_class = entropy(class_counts, n);

  // Per-term class counts among instances containing the term.
  std::map<std::string, std::map<std::string, std::int64_t>> present;
  for (const auto& inst : instances)
    for (const auto& [term, w] : inst.features)
      if (w > 0.0) ++present[term][inst.label];

  std::map<std::string, double> ig;
  for (const auto& [term, with_term] : present) {
    std::int64_t n1 = 0;
    for (const auto& [cls, c] : with_term) n1 += c;
    std::map<std::string, std::int64_t> without_term = class_counts;
    for (const auto& [cls, c] : with_term) without_term[cls] -= c;
    double h_cond = 0.0;
    if (n1 > 0)
      h_cond += static_cast<double>(n1) / n * entropy(with_term, n1);
    if (n - n1 > 0)
      h_cond +=
          static_cast<double>(n - n1) / n * entropy(without_term, n - n1);
    ig[term] = std::max(0.0, h_class - h_cond);
  }
  return ig;
}

std::map<std::string, std::string> ancestor_labels(const Corpus& corpus,
                                                   int distance) {
  const Hierarchy& h = corpus.hierarchy();
  std::map<std::string, std::string> labels;
  for (const auto& id : h.bfs_order())
    if (h.is_leaf(id) && h.depth(id) >= distance)
      labels.emplace(id, h.ancestor_at(id, distance));
  return labels;
}

std::vector<LabeledInstance> build_features(
    const Corpus& corpus, const std::vector<std::string>& leaf_ids,
    const std::map<std::string, std::string>& labels, WeightScheme scheme,
    const SchemeResources& resources) {
  if (scheme == WeightScheme::Ig && resources.ig_terms.empty())
    throw EvalError("ig scheme: no selected terms (empty training resources)");
  if (scheme == WeightScheme::Hswlm && resources.class_models.empty())
    throw EvalError("hswlm scheme: no class models (empty training resources)");

  std::unordered_set<std::string> kept(resources.ig_terms.begin(),
                                       resources.ig_terms.end());

  std::vector<LabeledInstance> out;
  out.reserve(leaf_ids.size());
  for (const auto& leaf : leaf_ids) {
    auto label_it = labels.find(leaf);
    if (label_it == labels.end())
      throw EvalError("no label for leaf '" + leaf + "'");

    LabeledInstance inst;
    inst.id = leaf;
    inst.label = label_it->second;
    for (const auto& [term, count] : corpus.pooled_counts(leaf)) {
      double w = static_cast<double>(count);
      switch (scheme) {
        case WeightScheme::Tf:
          break;
        case WeightScheme::Ig:
          if (!kept.count(term)) w = 0.0;
          break;
        case WeightScheme::Hswlm: {
          double model_mass = 0.0;
          for (const auto& [cls, model] : resources.class_models)
            model_mass += model.prob(term);
          w *= model_mass;
          break;
        }
      }
      if (w > 0.0) inst.features.emplace_back(term, w);
    }

    double norm = 0.0;
    for (const auto& [term, w] : inst.features) norm += w * w;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (auto& [term, w] : inst.features) w /= norm;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

const std::string& LinearModel::predict(const LabeledInstance& instance) const {
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    double score = bias[c];
    const auto& w = weights[c];
    for (const auto& [term, v] : instance.features) {
      auto it = w.find(term);
      if (it != w.end()) score += it->second * v;
    }
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return classes[best];
}

LinearModel train_linear(const std::vector<LabeledInstance>& instances,
                         int epochs, double learning_rate,
                         std::uint64_t seed) {
  std::map<std::string, std::int64_t> class_counts;
  for (const auto& inst : instances) ++class_counts[inst.label];
  if (class_counts.size() < 2)
    throw EvalError("training needs at least two classes");
  for (const auto& [cls, c] : class_counts)
    if (c < 1) throw EvalError("class '" + cls + "' has no instances");
  if (epochs < 1 || !(learning_rate > 0.0))
    throw EvalError("degenerate training configuration");

  LinearModel model;
  for (const auto& [cls, c] : class_counts) model.classes.push_back(cls);
  model.weights.resize(model.classes.size());
  model.bias.assign(model.classes.size(), 0.0);

  std::unordered_map<std::string, std::size_t> class_index;
  for (std::size_t c = 0; c < model.classes.size(); ++c)
    class_index.emplace(model.classes[c], c);

  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const LabeledInstance& inst = instances[idx];
      std::size_t truth = class_index.at(inst.label);
      for (std::size_t c = 0; c < model.classes.size(); ++c) {
        double y = c == truth ? 1.0 : -1.0;
        double score = model.bias[c];
        auto& w = model.weights[c];
        for (const auto& [term, v] : inst.features) {
          auto it = w.find(term);
          if (it != w.end()) score += it->second * v;
        }
        if (y * score < 1.0) {
          for (const auto& [term, v] : inst.features)
            w[term] += learning_rate * y * v;
          model.bias[c] += learning_rate * y;
        }
      }
    }
  }
  return model;
}

std::vector<std::vector<std::size_t>> kfold(
    const std::vector<LabeledInstance>& instances, int k, std::uint64_t seed) {
  if (k < 1 || static_cast<std::size_t>(k) > instances.size())
    throw EvalError("cannot split " + std::to_string(instances.size()) +
                    " instances into " + std::to_string(k) + " folds");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < instances.size(); ++i)
    by_class[instances[i].label].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t dealt = 0;
  for (auto& [cls, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i = 0; i < members.size(); ++i, ++dealt)
      folds[dealt % k].push_back(members[i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

EvalReport evaluate_predictions(
    const std::vector<std::pair<std::string, std::string>>& truth_predicted) {
  EvalReport report;
  std::set<std::string> class_set;
  for (const auto& [truth, pred] : truth_predicted) {
    class_set.insert(truth);
    class_set.insert(pred);
  }
  report.classes.assign(class_set.begin(), class_set.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < report.classes.size(); ++c)
    index.emplace(report.classes[c], c);

  report.confusion.assign(report.classes.size(),
                          std::vector<std::int64_t>(report.classes.size(), 0));
  for (const auto& [truth, pred] : truth_predicted)
    ++report.confusion[index.at(truth)][index.at(pred)];

  double recall_sum = 0.0;
  std::size_t classes_with_truth = 0;
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    std::int64_t row = 0, col = 0;
    for (std::size_t j = 0; j < report.classes.size(); ++j) {
      row += report.confusion[c][j];
      col += report.confusion[j][c];
    }
    std::int64_t hit = report.confusion[c][c];
    report.recall[report.classes[c]] =
        row > 0 ? static_cast<double>(hit) / row : 0.0;
    report.precision[report.classes[c]] =
        col > 0 ? static_cast<double>(hit) / col : 0.0;
    if (row > 0) {
      recall_sum += report.recall[report.classes[c]];
      ++classes_with_truth;
    }
  }
  report.macro_accuracy =
      classes_with_truth > 0 ? recall_sum / classes_with_truth : 0.0;
  return report;
}

namespace {

// Drops every document not owned by a kept leaf, then prunes the now-empty
// leaves (and any internal nodes left childless) from the hierarchy.
Corpus restrict_to_leaves(const Corpus& corpus,
                          const std::vector<std::string>& keep) {
  std::unordered_set<std::string> kept(keep.begin(), keep.end());
  std::vector<Document> docs;
  for (const auto& d : corpus.documents())
    if (kept.count(d.owner)) docs.push_back(d);
  return filter_short_leaves(Corpus(corpus.hierarchy(), std::move(docs)), 1);
}

SchemeResources fit_resources(const Corpus& train_corpus,
                              const std::vector<LabeledInstance>& train_tf,
                              const ExperimentConfig& config) {
  SchemeResources res;
  switch (config.scheme) {
    case WeightScheme::Tf:
      break;
    case WeightScheme::Ig: {
      auto ig = information_gain_weights(train_tf);
      std::vector<std::pair<std::string, double>> ranked(ig.begin(), ig.end());
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
                });
      std::size_t n = std::min<std::size_t>(
          ranked.size(), static_cast<std::size_t>(std::max(config.ig_top_n, 1)));
      for (std::size_t i = 0; i < n; ++i)
        res.ig_terms.push_back(ranked[i].first);
      break;
    }
    case WeightScheme::Hswlm: {
      auto [models, trace] = estimate_hswlm(train_corpus, config.estimation);
      std::set<std::string> classes;
      for (const auto& inst : train_tf) classes.insert(inst.label);
      for (const auto& cls : classes) {
        auto it = models.models.find(cls);
        if (it == models.models.end())
          throw EvalError("class '" + cls +
                          "' has no model in the training corpus");
        res.class_models.emplace(cls, it->second);
      }
      break;
    }
  }
  return res;
}

}  // namespace

std::vector<std::string> labeled_document_leaves(
    const Corpus& corpus, const std::map<std::string, std::string>& labels) {
  std::vector<std::string> leaves;
  for (const auto& id : corpus.hierarchy().bfs_order())
    if (corpus.hierarchy().is_leaf(id) && !corpus.docs_of(id).empty() &&
        labels.count(id))
      leaves.push_back(id);
  return leaves;
}

SchemeResources fit_scheme_resources(const Corpus& train_corpus,
                                     const ExperimentConfig& config) {
  auto labels = ancestor_labels(train_corpus, config.label_distance);
  auto leaves = labeled_document_leaves(train_corpus, labels);
  auto tf = build_features(train_corpus, leaves, labels, WeightScheme::Tf, {});
  return fit_resources(train_corpus, tf, config);
}

EvalReport kfold_eval(const Corpus& corpus, const ExperimentConfig& config) {
  auto labels = ancestor_labels(corpus, config.label_distance);
  auto leaves = labeled_document_leaves(corpus, labels);
  auto tf_all =
      build_features(corpus, leaves, labels, WeightScheme::Tf, {});
  auto folds = kfold(tf_all, config.folds, config.seed);

  std::vector<std::pair<std::string, std::string>> outcomes;
  for (const auto& fold : folds) {
    std::unordered_set<std::size_t> held(fold.begin(), fold.end());
    std::vector<std::string> train_ids, test_ids;
    std::vector<LabeledInstance> train_tf;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (held.count(i)) {
        test_ids.push_back(leaves[i]);
      } else {
        train_ids.push_back(leaves[i]);
        train_tf.push_back(tf_all[i]);
      }
    }
    SchemeResources res = fit_resources(restrict_to_leaves(corpus, train_ids),
                                        train_tf, config);
    auto train = build_features(corpus, train_ids, labels, config.scheme, res);
    auto test = build_features(corpus, test_ids, labels, config.scheme, res);
    LinearModel model =
        train_linear(train, config.epochs, config.learning_rate, config.seed);
    for (const auto& inst : test)
      outcomes.emplace_back(inst.label, model.predict(inst));
  }
  return evaluate_predictions(outcomes);
}

EvalReport cross_period_eval(const Corpus& train_corpus,
                             const Corpus& test_corpus,
                             const ExperimentConfig& config) {
  auto train_labels = ancestor_labels(train_corpus, config.label_distance);
  auto test_labels = ancestor_labels(test_corpus, config.label_distance);

  std::set<std::string> train_classes, test_classes;
  for (const auto& [leaf, cls] : train_labels) train_classes.insert(cls);
  for (const auto& [leaf, cls] : test_labels) test_classes.insert(cls);
  if (train_classes != test_classes)
    throw EvalError("train and test corpora have different class label spaces");

  auto train_ids = labeled_document_leaves(train_corpus, train_labels);
  auto test_ids = labeled_document_leaves(test_corpus, test_labels);
  auto train_tf = build_features(train_corpus, train_ids, train_labels,
                                 WeightScheme::Tf, {});
  SchemeResources res = fit_resources(train_corpus, train_tf, config);

  auto train =
      build_features(train_corpus, train_ids, train_labels, config.scheme, res);
  auto test =
      build_features(test_corpus, test_ids, test_labels, config.scheme, res);
  LinearModel model =
      train_linear(train, config.epochs, config.learning_rate, config.seed);

  std::vector<std::pair<std::string, std::string>> outcomes;
  for (const auto& inst : test)
    outcomes.emplace_back(inst.label, model.predict(inst));
  return evaluate_predictions(outcomes);
}

std::map<std::string, std::map<std::string, double>> scheme_distributions(
    const Corpus& corpus, const ExperimentConfig& config) {
  auto labels = ancestor_labels(corpus, config.label_distance);
  std::set<std::string> classes;
  for (const auto& [leaf, cls] : labels)
    if (!corpus.docs_of(leaf).empty()) classes.insert(cls);

  std::map<std::string, std::map<std::string, double>> out;
  switch (config.scheme) {
    case WeightScheme::Tf: {
      for (const auto& cls : classes) {
        auto& scores = out[cls];
        for (const auto& [term, count] : corpus.pooled_counts(cls))
          scores[term] = static_cast<double>(count);
      }
      break;
    }
    case WeightScheme::Ig: {
      auto leaves = labeled_document_leaves(corpus, labels);
      auto instances =
          build_features(corpus, leaves, labels, WeightScheme::Tf, {});
      for (const auto& cls : classes) {
        // One-vs-rest gain, kept only for terms the class itself uses.
        std::vector<LabeledInstance> binary = instances;
        for (auto& inst : binary)
          if (inst.label != cls) inst.label = "(rest)";
        auto ig = information_gain_weights(binary);
        auto& scores = out[cls];
        for (const auto& [term, count] : corpus.pooled_counts(cls)) {
          auto it = ig.find(term);
          if (it != ig.end() && it->second > 0.0) scores[term] = it->second;
        }
      }
      break;
    }
    case WeightScheme::Hswlm: {
      auto [models, trace] = estimate_hswlm(corpus, config.estimation);
      for (const auto& cls : classes) {
        auto& scores = out[cls];
        for (const auto& [term, p] : models.models.at(cls).entries())
          scores[term] = p;
      }
      break;
    }
  }
  return out;
}

std::string features_to_tsv(const std::vector<LabeledInstance>& instances) {
  std::ostringstream out;
  out << "id\tlabel\tterm:weight ...\n";
  for (const auto& inst : instances) {
    out << inst.id << '\t' << inst.label << '\t';
    for (std::size_t i = 0; i < inst.features.size(); ++i) {
      if (i) out << ' ';
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.12g", inst.features[i].second);
      out << inst.features[i].first << ':' << buf;
    }
    out << '\n';
  }
  return out.str();
}

DiversityReport diversity_report(const std::vector<SchemeRep>& reps,
                                 std::size_t top_k) {
  auto renormalized = [&](const SchemeRep& rep) {
    std::vector<SparseLM::Entry> entries(rep.scores.begin(), rep.scores.end());
    std::sort(entries.begin(), entries.end(),
              [](const SparseLM::Entry& a, const SparseLM::Entry& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    if (entries.size() > top_k) entries.resize(top_k);
    return SparseLM::from_weights(std::move(entries),
                                  rep.scheme + ":" + rep.class_id);
  };

  DiversityReport report;
  std::map<std::string, std::map<std::string, std::pair<double, int>>> agg;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const SchemeRep& a = reps[i];
      const SchemeRep& b = reps[j];
      if (a.scheme != b.scheme) continue;
      bool same_class = a.class_id == b.class_id;
      bool same_period = a.period == b.period;
      if (same_class && same_period) continue;
      std::string case_name =
          same_class ? "same_class_different_period"
          : same_period ? "different_class_same_period"
                        : "different_class_different_period";
      double jsd = js_divergence(renormalized(a), renormalized(b));
      report.pairs.push_back({a.scheme, case_name, a.class_id, a.period,
                              b.class_id, b.period, jsd});
      auto& [sum, count] = agg[case_name][a.scheme];
      sum += jsd;
      ++count;
    }
  }
  for (const auto& [case_name, by_scheme] : agg)
    for (const auto& [scheme, sum_count] : by_scheme)
      report.mean[case_name][scheme] = sum_count.first / sum_count.second;
  return report;
}

}  // namespace hswlm
