#ifndef HSWLM_EVALKIT_HPP
#define HSWLM_EVALKIT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hswlm/corpus.hpp"
#include "hswlm/hswlm.hpp"
#include "hswlm/langmodel.hpp"

namespace hswlm {

// One classification instance: a leaf with its sparse feature vector and
// class label. Features are L2-normalized (all-zero vectors stay zero).
struct LabeledInstance {
  std::string id;
  std::vector<std::pair<std::string, double>> features;  // sorted by term
  std::string label;
};

enum class WeightScheme { Tf, Ig, Hswlm };

std::string scheme_name(WeightScheme scheme);
WeightScheme scheme_from_name(const std::string& name);

// Everything a scheme needs that must be fitted on the training split only.
struct SchemeResources {
  std::vector<std::string> ig_terms;             // Ig: kept terms
  std::map<std::string, SparseLM> class_models;  // Hswlm: per-class models
};

// Multiclass information gain of term presence against the instance labels,
// in bits. Requires at least two classes.
std::map<std::string, double> information_gain_weights(
    const std::vector<LabeledInstance>& instances);

// Labels every document-owning leaf with its ancestor `distance` edges up.
std::map<std::string, std::string> ancestor_labels(const Corpus& corpus,
                                                   int distance = 1);

// Labeled leaves that own at least one document, in hierarchy order.
std::vector<std::string> labeled_document_leaves(
    const Corpus& corpus, const std::map<std::string, std::string>& labels);

// Feature vectors for the given leaves. Tf: raw term frequencies. Ig:
// frequencies restricted to resources.ig_terms. Hswlm: frequency times the
// summed probability of the term across all class models.
std::vector<LabeledInstance> build_features(
    const Corpus& corpus, const std::vector<std::string>& leaf_ids,
    const std::map<std::string, std::string>& labels, WeightScheme scheme,
    const SchemeResources& resources);

// One-vs-rest linear classifier trained with hinge-loss SGD.
struct LinearModel {
  std::vector<std::string> classes;  // sorted
  std::vector<std::map<std::string, double>> weights;  // parallel to classes
  std::vector<double> bias;

  const std::string& predict(const LabeledInstance& instance) const;
};

LinearModel train_linear(const std::vector<LabeledInstance>& instances,
                         int epochs, double learning_rate, std::uint64_t seed);

// Deterministic stratified k-fold split; returns instance indices per fold.
std::vector<std::vector<std::size_t>> kfold(
    const std::vector<LabeledInstance>& instances, int k, std::uint64_t seed);

struct EvalReport {
  std::vector<std::string> classes;  // sorted
  // confusion[i][j]: instances of classes[i] predicted as classes[j].
  std::vector<std::vector<std::int64_t>> confusion;
  std::map<std::string, double> precision;
  std::map<std::string, double> recall;
  double macro_accuracy = 0.0;  // unweighted mean of per-class recall
};

EvalReport evaluate_predictions(
    const std::vector<std::pair<std::string, std::string>>& truth_predicted);

// Experiment knobs shared by the classification drivers.
struct ExperimentConfig {
  WeightScheme scheme = WeightScheme::Tf;
  int ig_top_n = 1000;
  EstimationConfig estimation;
  int label_distance = 1;  // class = ancestor this far above each leaf
  int folds = 5;
  int epochs = 50;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;
};

// Fits a scheme's resources on a whole corpus: IG ranks from its instances,
// class models from a fresh estimation.
SchemeResources fit_scheme_resources(const Corpus& train_corpus,
                                     const ExperimentConfig& config);

// Stratified k-fold evaluation within one corpus. Scheme resources are
// re-fitted per fold on the training members only.
EvalReport kfold_eval(const Corpus& corpus, const ExperimentConfig& config);

// Fits resources and the classifier on the training corpus, evaluates on the
// test corpus. The two corpora must share the class label space.
EvalReport cross_period_eval(const Corpus& train_corpus,
                             const Corpus& test_corpus,
                             const ExperimentConfig& config);

// Term-importance distribution per class under one weighting scheme:
// Tf: pooled class frequencies; Ig: one-vs-rest information gain over the
// class's own terms; Hswlm: the class model probabilities.
std::map<std::string, std::map<std::string, double>> scheme_distributions(
    const Corpus& corpus, const ExperimentConfig& config);

// One class representation entering the diversity comparison.
struct SchemeRep {
  std::string scheme;
  std::string class_id;
  std::string period;
  std::map<std::string, double> scores;
};

struct DiversityPair {
  std::string scheme;
  std::string case_name;
  std::string class_a, period_a;
  std::string class_b, period_b;
  double jsd;
};

struct DiversityReport {
  std::vector<DiversityPair> pairs;
  // case -> scheme -> mean JSD
  std::map<std::string, std::map<std::string, double>> mean;
};

// Pairwise JS divergence between class representations, each renormalized
// over its top_k highest-scored terms, grouped into the three cases
// different-class/same-period, same-class/different-period and
// different-class/different-period.
DiversityReport diversity_report(const std::vector<SchemeRep>& reps,
                                 std::size_t top_k = 500);

// Feature matrix as TSV ("id<TAB>label<TAB>term:weight ..."), one row per
// instance, for feeding external learners.
std::string features_to_tsv(const std::vector<LabeledInstance>& instances);

}  // namespace hswlm

#endif  // HSWLM_EVALKIT_HPP
