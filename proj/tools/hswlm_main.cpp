// Command-line front door: corpus ingestion, HSWLM estimation, model
// inspection, divergence and classification experiments, synthetic corpus
// generation. Exit codes: 0 ok, 2 input/parse error, 3 estimation error,
// 4 evaluation error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hswlm/evalkit.hpp"
#include "hswlm/hswlm.hpp"
#include "hswlm/io.hpp"
#include "hswlm/synth.hpp"

namespace fs = std::filesystem;
using namespace hswlm;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(ParseError::Kind::BadRecord, path,
                     "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError(ParseError::Kind::BadRecord, path,
                     "cannot write '" + path + "'");
  out << content;
}

// Flags shared by every command that runs the estimator.
struct EstimationFlags {
  double lambda = 0.1;
  double prune = 1e-5;
  double em_tol = 1e-6;
  int em_iters = 50;
  double outer_tol = 1e-4;
  int outer_iters = 25;
  int threads = 1;
  bool floor = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda,
                    "mixing weight of the specific model (0,1)");
    cmd->add_option("--prune", prune, "drop threshold after EM convergence");
    cmd->add_option("--em-tol", em_tol, "EM convergence tolerance (L1)");
    cmd->add_option("--em-iters", em_iters, "EM iteration cap");
    cmd->add_option("--outer-tol", outer_tol,
                    "outer loop convergence tolerance (L1)");
    cmd->add_option("--outer-iters", outer_iters, "outer iteration cap");
    cmd->add_option("--threads", threads, "worker threads per level");
    cmd->add_flag("--floor", floor,
                  "keep the strongest term instead of failing when a model "
                  "prunes to nothing");
  }

  EstimationConfig to_config() const {
    EstimationConfig cfg;
    cfg.parsimony.lambda = lambda;
    cfg.parsimony.prune_epsilon = prune;
    cfg.parsimony.em_tolerance = em_tol;
    cfg.parsimony.max_em_iters = em_iters;
    cfg.outer_tolerance = outer_tol;
    cfg.max_outer_iters = outer_iters;
    cfg.threads = threads;
    cfg.floor_all_pruned = floor;
    return cfg;
  }

  void describe(RunManifest* manifest) const {
    manifest->config.emplace_back("lambda", format_sig(lambda));
    manifest->config.emplace_back("prune", format_sig(prune));
    manifest->config.emplace_back("em_tol", format_sig(em_tol));
    manifest->config.emplace_back("em_iters", std::to_string(em_iters));
    manifest->config.emplace_back("outer_tol", format_sig(outer_tol));
    manifest->config.emplace_back("outer_iters", std::to_string(outer_iters));
    manifest->config.emplace_back("threads", std::to_string(threads));
    manifest->config.emplace_back("floor", floor ? "true" : "false");
  }
};

struct CorpusFlags {
  std::string hierarchy_path;
  std::string docs_path;
  std::int64_t min_tokens = 100;
  bool doc_leaves = false;

  void attach(CLI::App* cmd, bool required = true) {
    auto* h = cmd->add_option("--hierarchy", hierarchy_path,
                              "hierarchy file (nested JSON or TSV edges)");
    auto* d = cmd->add_option("--docs", docs_path,
                              "documents file (JSONL records)");
    if (required) {
      h->required();
      d->required();
    }
    cmd->add_option("--min-tokens", min_tokens,
                    "drop leaves with fewer pooled tokens");
    cmd->add_flag("--doc-leaves", doc_leaves,
                  "model each document as its own leaf");
  }

  bool partially_set() const {
    return hierarchy_path.empty() != docs_path.empty();
  }

  Corpus load(RunManifest* manifest) const {
    std::string hier_text = read_file(hierarchy_path);
    std::string docs_text = read_file(docs_path);
    if (manifest) {
      manifest->input_digests[hierarchy_path] = fnv1a64_hex(hier_text);
      manifest->input_digests[docs_path] = fnv1a64_hex(docs_text);
      manifest->config.emplace_back("min_tokens", std::to_string(min_tokens));
      manifest->config.emplace_back("doc_leaves",
                                    doc_leaves ? "true" : "false");
    }
    Corpus corpus = ingest_documents(parse_doc_records(docs_text),
                                     parse_hierarchy(hier_text));
    corpus = filter_short_leaves(corpus, min_tokens);
    if (doc_leaves) corpus = explode_document_leaves(corpus);
    return corpus;
  }
};

class ManifestTimer {
 public:
  explicit ManifestTimer(RunManifest* manifest)
      : manifest_(manifest), start_(std::chrono::steady_clock::now()) {}

  void finish(const std::string& path) {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    manifest_->duration_ms =
        std::chrono::duration<double, std::milli>(elapsed).count();
    manifest_->version = kVersion;
    write_file(path, manifest_to_json(*manifest_));
  }

 private:
  RunManifest* manifest_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// estimate

int cmd_estimate(const CorpusFlags& corpus_flags, const EstimationFlags& est,
                 const std::string& out_path, const std::string& trace_path,
                 std::uint64_t seed) {
  RunManifest manifest;
  manifest.command = "estimate";
  manifest.seed = seed;
  ManifestTimer timer(&manifest);
  est.describe(&manifest);

  Corpus corpus = corpus_flags.load(&manifest);
  auto [models, trace] = estimate_hswlm(corpus, est.to_config());

  std::ostringstream out;
  write_models(out, models, corpus.hierarchy().bfs_order());
  write_file(out_path, out.str());
  {
    std::ostringstream tr;
    write_trace_tsv(tr, trace);
    write_file(trace_path.empty() ? out_path + ".trace.tsv" : trace_path,
               tr.str());
  }
  timer.finish(out_path + ".manifest.json");
  std::cout << "wrote " << models.models.size() << " models to " << out_path
            << " after " << models.iteration << " iteration(s)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// inspect

int cmd_inspect(const std::string& models_path, const std::string& entity,
                std::size_t top, const std::vector<std::string>& curve,
                const std::string& out_path) {
  std::istringstream in(read_file(models_path));
  ModelSet models = read_models(in);

  if (curve.empty() && entity.empty())
    throw ParseError(ParseError::Kind::BadRecord, "",
                     "inspect needs --entity or --curve");

  std::ostringstream out;
  if (!curve.empty()) {
    // Shared term order anchored to the first listed entity: its terms by
    // descending probability, then everything else the others add.
    for (const auto& id : curve)
      if (!models.models.count(id))
        throw ParseError(ParseError::Kind::UnknownEntity, id,
                         "no model for entity '" + id + "'");
    const SparseLM& anchor = models.models.at(curve.front());
    std::vector<std::string> order;
    for (const auto& [term, p] : top_k(anchor, anchor.support_size()))
      order.push_back(term);
    std::map<std::string, double> rest;
    for (const auto& id : curve)
      for (const auto& [term, p] : models.models.at(id).entries())
        if (!anchor.contains(term))
          rest[term] = std::max(rest[term], p);
    std::vector<std::pair<std::string, double>> tail(rest.begin(), rest.end());
    std::sort(tail.begin(), tail.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto& [term, p] : tail) order.push_back(term);

    out << "rank\tterm";
    for (const auto& id : curve) out << '\t' << id;
    out << '\n';
    for (std::size_t r = 0; r < order.size(); ++r) {
      out << (r + 1) << '\t' << order[r];
      for (const auto& id : curve)
        out << '\t' << format_sig(models.models.at(id).prob(order[r]));
      out << '\n';
    }
  } else {
    if (!models.models.count(entity))
      throw ParseError(ParseError::Kind::UnknownEntity, entity,
                       "no model for entity '" + entity + "'");
    out << "rank\tterm\tprob\n";
    std::size_t rank = 1;
    for (const auto& [term, p] : top_k(models.models.at(entity), top))
      out << rank++ << '\t' << term << '\t' << format_sig(p) << '\n';
  }

  if (out_path.empty())
    std::cout << out.str();
  else
    write_file(out_path, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// divergence

void append_model_reps(const std::string& path, const std::string& period,
                       RunManifest* manifest, std::vector<SchemeRep>* reps) {
  std::string text = read_file(path);
  manifest->input_digests[path] = fnv1a64_hex(text);
  std::istringstream in(text);
  ModelSet models = read_models(in);
  for (const auto& [id, model] : models.models) {
    SchemeRep rep;
    rep.scheme = "model";
    rep.class_id = id;
    rep.period = period;
    for (const auto& [term, p] : model.entries()) rep.scores[term] = p;
    reps->push_back(std::move(rep));
  }
}

std::string divergence_table(const DiversityReport& report,
                             const std::vector<std::string>& schemes) {
  std::ostringstream out;
  out << "case";
  for (const auto& s : schemes) out << '\t' << s;
  out << '\n';
  for (const char* case_name :
       {"different_class_same_period", "same_class_different_period",
        "different_class_different_period"}) {
    auto row = report.mean.find(case_name);
    out << case_name;
    for (const auto& s : schemes) {
      out << '\t';
      if (row != report.mean.end() && row->second.count(s))
        out << format_sig(row->second.at(s));
      else
        out << "n/a";
    }
    out << '\n';
  }
  return out.str();
}

int cmd_divergence_models(const std::string& models_a,
                          const std::string& models_b, std::size_t top,
                          const std::string& out_path, std::uint64_t seed) {
  RunManifest manifest;
  manifest.command = "divergence";
  manifest.seed = seed;
  ManifestTimer timer(&manifest);
  manifest.config.emplace_back("top_k", std::to_string(top));

  std::vector<SchemeRep> reps;
  append_model_reps(models_a, "a", &manifest, &reps);
  append_model_reps(models_b.empty() ? models_a : models_b, "b", &manifest,
                    &reps);
  DiversityReport report = diversity_report(reps, top);

  std::ostringstream out;
  out << "entity_a\tperiod_a\tentity_b\tperiod_b\tcase\tjsd\n";
  for (const auto& pair : report.pairs)
    out << pair.class_a << '\t' << pair.period_a << '\t' << pair.class_b
        << '\t' << pair.period_b << '\t' << pair.case_name << '\t'
        << format_sig(pair.jsd) << '\n';
  write_file(out_path, out.str());
  timer.finish(out_path + ".manifest.json");
  std::cout << divergence_table(report, {"model"});
  return 0;
}

int cmd_divergence_corpora(const CorpusFlags& flags_a, CorpusFlags flags_b,
                           const EstimationFlags& est, int label_distance,
                           int ig_top, std::size_t top,
                           const std::string& out_path, std::uint64_t seed) {
  RunManifest manifest;
  manifest.command = "divergence";
  manifest.seed = seed;
  ManifestTimer timer(&manifest);
  est.describe(&manifest);
  manifest.config.emplace_back("top_k", std::to_string(top));
  manifest.config.emplace_back("label_distance",
                               std::to_string(label_distance));

  Corpus corpus_a = flags_a.load(&manifest);
  bool two_periods = !flags_b.hierarchy_path.empty();
  std::vector<std::pair<std::string, const Corpus*>> periods;
  periods.emplace_back("a", &corpus_a);
  std::optional<Corpus> corpus_b;
  if (two_periods) {
    corpus_b = flags_b.load(&manifest);
    periods.emplace_back("b", &*corpus_b);
  }

  std::vector<SchemeRep> reps;
  std::vector<std::string> schemes = {"tf", "ig", "hswlm"};
  for (WeightScheme scheme :
       {WeightScheme::Tf, WeightScheme::Ig, WeightScheme::Hswlm}) {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.estimation = est.to_config();
    cfg.label_distance = label_distance;
    cfg.ig_top_n = ig_top;
    cfg.seed = seed;
    for (const auto& [period, corpus] : periods) {
      for (auto& [cls, scores] : scheme_distributions(*corpus, cfg))
        reps.push_back({scheme_name(scheme), cls, period, std::move(scores)});
    }
  }
  DiversityReport report = diversity_report(reps, top);
  std::string table = divergence_table(report, schemes);
  write_file(out_path, table);
  timer.finish(out_path + ".manifest.json");
  std::cout << table;
  return 0;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const CorpusFlags& flags_a, CorpusFlags flags_b,
                 const EstimationFlags& est, const std::string& scheme_flag,
                 bool all_schemes, int folds, int ig_top, int label_distance,
                 int epochs, double learning_rate, std::uint64_t seed,
                 const std::string& out_path,
                 const std::string& features_prefix) {
  RunManifest manifest;
  manifest.command = "classify";
  manifest.seed = seed;
  ManifestTimer timer(&manifest);
  est.describe(&manifest);
  manifest.config.emplace_back("scheme", all_schemes ? "all" : scheme_flag);
  manifest.config.emplace_back("folds", std::to_string(folds));
  manifest.config.emplace_back("ig_top", std::to_string(ig_top));
  manifest.config.emplace_back("epochs", std::to_string(epochs));
  manifest.config.emplace_back("learning_rate", format_sig(learning_rate));

  Corpus corpus_a = flags_a.load(&manifest);
  bool two_periods = !flags_b.hierarchy_path.empty();
  std::vector<std::pair<std::string, const Corpus*>> periods;
  periods.emplace_back("a", &corpus_a);
  std::optional<Corpus> corpus_b;
  if (two_periods) {
    corpus_b = flags_b.load(&manifest);
    periods.emplace_back("b", &*corpus_b);
  }

  std::vector<WeightScheme> schemes;
  if (all_schemes)
    schemes = {WeightScheme::Tf, WeightScheme::Ig, WeightScheme::Hswlm};
  else
    schemes = {scheme_from_name(scheme_flag)};

  auto config_for = [&](WeightScheme scheme) {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.estimation = est.to_config();
    cfg.label_distance = label_distance;
    cfg.ig_top_n = ig_top;
    cfg.folds = folds;
    cfg.epochs = epochs;
    cfg.learning_rate = learning_rate;
    cfg.seed = seed;
    return cfg;
  };

  // Rows: training period. Columns: scheme x test period. Within-period
  // cells are k-fold runs, cross-period cells train on the full period.
  std::ostringstream out;
  out << "train";
  for (WeightScheme scheme : schemes)
    for (const auto& [test_name, corpus] : periods)
      out << '\t' << scheme_name(scheme) << ':' << test_name;
  out << '\n';
  for (const auto& [train_name, train_corpus] : periods) {
    out << train_name;
    for (WeightScheme scheme : schemes) {
      for (const auto& [test_name, test_corpus] : periods) {
        EvalReport report =
            train_name == test_name
                ? kfold_eval(*train_corpus, config_for(scheme))
                : cross_period_eval(*train_corpus, *test_corpus,
                                    config_for(scheme));
        out << '\t' << format_sig(report.macro_accuracy);
      }
    }
    out << '\n';
  }
  write_file(out_path, out.str());

  // Feature matrices for external learners: resources fitted on the first
  // period, features written for every period.
  if (!features_prefix.empty()) {
    for (WeightScheme scheme : schemes) {
      ExperimentConfig cfg = config_for(scheme);
      SchemeResources res = fit_scheme_resources(corpus_a, cfg);
      for (const auto& [period_name, corpus] : periods) {
        auto labels = ancestor_labels(*corpus, cfg.label_distance);
        auto leaves = labeled_document_leaves(*corpus, labels);
        write_file(features_prefix + "." + scheme_name(scheme) + "." +
                       period_name + ".tsv",
                   features_to_tsv(build_features(*corpus, leaves, labels,
                                                  scheme, res)));
      }
    }
  }

  timer.finish(out_path + ".manifest.json");
  std::cout << out.str();
  return 0;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const SynthSpec& spec, const std::string& out_dir) {
  RunManifest manifest;
  manifest.command = "synth";
  manifest.seed = spec.seed;
  ManifestTimer timer(&manifest);
  {
    std::ostringstream fan, mix;
    for (std::size_t i = 0; i < spec.fanouts.size(); ++i)
      fan << (i ? "," : "") << spec.fanouts[i];
    for (std::size_t i = 0; i < spec.layer_mix.size(); ++i)
      mix << (i ? "," : "") << format_sig(spec.layer_mix[i]);
    manifest.config.emplace_back("fanouts", fan.str());
    manifest.config.emplace_back("mix", mix.str());
    manifest.config.emplace_back("planted",
                                 std::to_string(spec.planted_per_entity));
    manifest.config.emplace_back("general", std::to_string(spec.general_terms));
    manifest.config.emplace_back("docs_per_leaf",
                                 std::to_string(spec.docs_per_leaf));
    manifest.config.emplace_back("doc_length", std::to_string(spec.doc_length));
  }

  SynthCorpus synth = synth_corpus(spec);
  fs::create_directories(out_dir);
  auto path = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };
  write_file(path("period_a.hierarchy.json"),
             hierarchy_to_json(synth.period_a.hierarchy()));
  write_file(path("period_a.docs.jsonl"), documents_to_jsonl(synth.period_a));
  write_file(path("period_b.hierarchy.json"),
             hierarchy_to_json(synth.period_b.hierarchy()));
  write_file(path("period_b.docs.jsonl"), documents_to_jsonl(synth.period_b));

  {
    nlohmann::ordered_json planted;
    for (const auto& [entity, terms] : synth.planted) planted[entity] = terms;
    write_file(path("planted.json"), planted.dump(2) + "\n");
  }
  {
    std::ostringstream labels;
    labels << "leaf\tlabel\n";
    for (const auto& [leaf, label] : synth.labels)
      labels << leaf << '\t' << label << '\n';
    write_file(path("labels.tsv"), labels.str());
  }
  timer.finish(path("manifest.json"));
  std::cout << "wrote two-period synthetic corpus ("
            << synth.period_a.documents().size() << " documents per period) to "
            << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical significant words language models"};
  app.require_subcommand(1);
  // Let --seed appear before or after the subcommand name.
  app.fallthrough();
  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "seed for every randomized step")
      ->capture_default_str();

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "estimate models for every entity of a corpus");
  CorpusFlags est_corpus;
  EstimationFlags est_flags;
  std::string est_out, est_trace;
  est_corpus.attach(estimate);
  est_flags.attach(estimate);
  estimate->add_option("--out", est_out, "output model file (JSONL)")
      ->required();
  estimate->add_option("--trace", est_trace,
                       "per-pass trace TSV (default: <out>.trace.tsv)");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "look into a model file");
  std::string ins_models, ins_entity, ins_out;
  std::size_t ins_top = 20;
  std::vector<std::string> ins_curve;
  inspect->add_option("--models", ins_models, "model file")->required();
  inspect->add_option("--entity", ins_entity, "entity to list");
  inspect->add_option("--top-k", ins_top, "rows to print");
  inspect
      ->add_option("--curve", ins_curve,
                   "entities for sorted-probability curves (shared term "
                   "order anchored to the first)")
      ->delimiter(',');
  inspect->add_option("--out", ins_out, "output file (default stdout)");

  // divergence
  auto* divergence = app.add_subcommand(
      "divergence", "Jensen-Shannon divergence reports");
  CorpusFlags div_a, div_b;
  EstimationFlags div_est;
  std::string div_models_a, div_models_b, div_out;
  std::size_t div_top = 500;
  int div_label_distance = 1, div_ig_top = 1000;
  divergence->add_option("--models", div_models_a,
                         "model file (pairwise entity mode)");
  divergence->add_option("--models-b", div_models_b,
                         "second model file (defaults to --models)");
  div_a.attach(divergence, /*required=*/false);
  divergence->add_option("--hierarchy-b", div_b.hierarchy_path,
                         "second-period hierarchy");
  divergence->add_option("--docs-b", div_b.docs_path, "second-period documents");
  div_est.attach(divergence);
  divergence->add_option("--top-k", div_top, "terms kept per distribution");
  divergence->add_option("--label-distance", div_label_distance,
                         "class = ancestor this far above each leaf");
  divergence->add_option("--ig-top", div_ig_top, "IG terms kept");
  divergence->add_option("--out", div_out, "output TSV")->required();

  // classify
  auto* classify = app.add_subcommand(
      "classify", "train and score the class prediction experiments");
  CorpusFlags cls_a, cls_b;
  EstimationFlags cls_est;
  std::string cls_scheme = "tf", cls_out, cls_features;
  bool cls_all = false;
  int cls_folds = 5, cls_ig_top = 1000, cls_label_distance = 1,
      cls_epochs = 50;
  double cls_lr = 0.1;
  cls_a.attach(classify);
  classify->add_option("--hierarchy-b", cls_b.hierarchy_path,
                       "second-period hierarchy");
  classify->add_option("--docs-b", cls_b.docs_path, "second-period documents");
  cls_est.attach(classify);
  classify
      ->add_option("--scheme", cls_scheme, "feature weighting: tf, ig, hswlm")
      ->check(CLI::IsMember({"tf", "ig", "hswlm"}));
  classify->add_flag("--all-schemes", cls_all, "run tf, ig and hswlm");
  classify->add_option("--folds", cls_folds, "within-period folds");
  classify->add_option("--ig-top", cls_ig_top, "IG terms kept");
  classify->add_option("--label-distance", cls_label_distance,
                       "class = ancestor this far above each leaf");
  classify->add_option("--epochs", cls_epochs, "training epochs");
  classify->add_option("--lr", cls_lr, "learning rate");
  classify->add_option("--out", cls_out, "output TSV")->required();
  classify->add_option("--features-out", cls_features,
                       "prefix for feature matrix TSVs (one per scheme and "
                       "period, resources fitted on the first period)");

  // synth
  auto* synth = app.add_subcommand(
      "synth", "generate a two-period planted-vocabulary corpus");
  SynthSpec synth_spec;
  std::string synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--fanouts", synth_spec.fanouts, "children per layer")
      ->delimiter(',');
  synth->add_option("--planted", synth_spec.planted_per_entity,
                    "planted terms per entity");
  synth->add_option("--general", synth_spec.general_terms,
                    "shared general terms");
  synth->add_option("--docs-per-leaf", synth_spec.docs_per_leaf,
                    "documents per leaf");
  synth->add_option("--doc-length", synth_spec.doc_length, "tokens per document");
  synth->add_option("--mix", synth_spec.layer_mix,
                    "mixing proportion per layer, root first")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*estimate)
      return cmd_estimate(est_corpus, est_flags, est_out, est_trace, seed);
    if (*inspect)
      return cmd_inspect(ins_models, ins_entity, ins_top, ins_curve, ins_out);
    if (*divergence) {
      if (!div_models_a.empty())
        return cmd_divergence_models(div_models_a, div_models_b, div_top,
                                     div_out, seed);
      if (div_a.hierarchy_path.empty())
        throw ParseError(ParseError::Kind::BadRecord, "",
                         "divergence needs --models or --hierarchy/--docs");
      if (div_b.partially_set())
        throw ParseError(ParseError::Kind::BadRecord, "",
                         "--hierarchy-b and --docs-b must be given together");
      div_b.min_tokens = div_a.min_tokens;
      div_b.doc_leaves = div_a.doc_leaves;
      return cmd_divergence_corpora(div_a, div_b, div_est, div_label_distance,
                                    div_ig_top, div_top, div_out, seed);
    }
    if (*classify) {
      if (cls_b.partially_set())
        throw ParseError(ParseError::Kind::BadRecord, "",
                         "--hierarchy-b and --docs-b must be given together");
      cls_b.min_tokens = cls_a.min_tokens;
      cls_b.doc_leaves = cls_a.doc_leaves;
      return cmd_classify(cls_a, cls_b, cls_est, cls_scheme, cls_all,
                          cls_folds, cls_ig_top, cls_label_distance,
                          cls_epochs, cls_lr, seed, cls_out, cls_features);
    }
    if (*synth) {
      synth_spec.seed = seed;
      return cmd_synth(synth_spec, synth_out);
    }
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const EstimationError& err) {
    std::cerr << "estimation error: " << err.what() << "\n";
    return 3;
  } catch (const EvalError& err) {
    std::cerr << "evaluation error: " << err.what() << "\n";
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "unexpected error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
