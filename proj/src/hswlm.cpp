#include "hswlm/hswlm.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace hswlm {

void EstimationConfig::validate() const {
  parsimony.validate();
  if (!(outer_tolerance > 0.0))
    throw std::invalid_argument("outer_tolerance must be positive");
  if (max_outer_iters < 1)
    throw std::invalid_argument("max_outer_iters must be at least 1");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

namespace {

// Runs fn(i) for i in [0, n), split in contiguous chunks across threads.
// Every call writes only its own slot of a preallocated result vector, so
// scheduling cannot change the outcome.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  std::size_t workers =
      std::min(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SparseLM parsimonize_entity(const SparseLM& target, const SparseLM& background,
                            const EstimationConfig& cfg,
                            const std::string& entity) {
  try {
    return parsimonize(target, background, cfg.parsimony);
  } catch (const EstimationError& err) {
    if (err.kind() != EstimationError::Kind::AllPruned || !cfg.floor_all_pruned)
      throw EstimationError(err.kind(), entity,
                            "entity '" + entity + "': " + err.what());
    // Floor: redo without pruning and keep only the strongest surviving term.
    ParsimonyConfig no_prune = cfg.parsimony;
    no_prune.prune_epsilon = 0.0;
    SparseLM full = parsimonize(target, background, no_prune);
    auto best = top_k(full, 1);
    return SparseLM::from_weights({{best.front().first, 1.0}}, entity);
  }
}

// Entity ids grouped by level (depth or height), each group in BFS order.
std::vector<std::vector<std::string>> group_by_level(const Hierarchy& h,
                                                     bool by_depth) {
  std::map<int, std::vector<std::string>> groups;
  for (const auto& id : h.bfs_order())
    groups[by_depth ? h.depth(id) : h.height(id)].push_back(id);
  std::vector<std::vector<std::string>> levels;
  for (auto& [level, ids] : groups) levels.push_back(std::move(ids));
  return levels;
}

void record(EstimationTrace* trace, int iteration, const char* stage,
            const std::string& entity, double l1, std::size_t support) {
  if (trace) trace->records.push_back({iteration, stage, entity, l1, support});
}

}  // namespace

ModelSet initialize(const Corpus& corpus) {
  ModelSet ms;
  for (const auto& id : corpus.hierarchy().bfs_order())
    ms.models.emplace(id, mle_entity(corpus, id));
  ms.iteration = 0;
  return ms;
}

ModelSet specification_pass(const ModelSet& models, const Hierarchy& hierarchy,
                            const EstimationConfig& config,
                            EstimationTrace* trace, int iteration) {
  config.validate();
  ModelSet out = models;
  auto levels = group_by_level(hierarchy, /*by_depth=*/true);
  // levels[0] is the root alone; nothing above it to remove.
  for (std::size_t d = 1; d < levels.size(); ++d) {
    const auto& ids = levels[d];
    std::vector<std::optional<SparseLM>> results(ids.size());
    parallel_for(ids.size(), config.threads, [&](std::size_t i) {
      const std::string& id = ids[i];
      SparseLM model = out.models.at(id);
      for (int l = hierarchy.depth(id); l >= 1; --l) {
        const SparseLM& bg = out.models.at(hierarchy.ancestor_at(id, l));
        model = parsimonize_entity(model, bg, config, id);
      }
      results[i] = std::move(model);
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
      record(trace, iteration, "specification", ids[i],
             l1_distance(models.models.at(ids[i]), *results[i]),
             results[i]->support_size());
      out.models.at(ids[i]) = std::move(*results[i]);
    }
  }
  return out;
}

ModelSet generalization_pass(const ModelSet& models, const Hierarchy& hierarchy,
                             const EstimationConfig& config,
                             EstimationTrace* trace, int iteration) {
  config.validate();
  ModelSet out = models;
  auto levels = group_by_level(hierarchy, /*by_depth=*/false);
  // levels[0] holds the leaves; nothing below them to remove.
  for (std::size_t hgt = 1; hgt < levels.size(); ++hgt) {
    const auto& ids = levels[hgt];
    std::vector<std::optional<SparseLM>> results(ids.size());
    parallel_for(ids.size(), config.threads, [&](std::size_t i) {
      const std::string& id = ids[i];
      SparseLM model = out.models.at(id);
      for (int l = hierarchy.height(id); l >= 1; --l) {
        std::vector<const SparseLM*> below;
        for (const auto& did : hierarchy.descendants_at(id, l))
          below.push_back(&out.models.at(did));
        SparseLM bg = [&] {
          try {
            return combine_backgrounds(below);
          } catch (const EstimationError& err) {
            throw EstimationError(err.kind(), id,
                                  "entity '" + id + "': " + err.what());
          }
        }();
        model = parsimonize_entity(model, bg, config, id);
      }
      results[i] = std::move(model);
    });
    for (std::size_t i = 0; i < ids.size(); ++i) {
      record(trace, iteration, "generalization", ids[i],
             l1_distance(models.models.at(ids[i]), *results[i]),
             results[i]->support_size());
      out.models.at(ids[i]) = std::move(*results[i]);
    }
  }
  return out;
}

std::pair<ModelSet, EstimationTrace> estimate_hswlm(
    const Corpus& corpus, const EstimationConfig& config) {
  config.validate();
  EstimationTrace trace;
  ModelSet current = initialize(corpus);
  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    ModelSet before = current;
    current = specification_pass(current, corpus.hierarchy(), config, &trace,
                                 iter);
    current = generalization_pass(current, corpus.hierarchy(), config, &trace,
                                  iter);
    current.iteration = iter;
    double max_change = 0.0;
    for (const auto& [id, model] : current.models)
      max_change =
          std::max(max_change, l1_distance(before.models.at(id), model));
    if (max_change < config.outer_tolerance) break;
  }
  return {std::move(current), std::move(trace)};
}

}  // namespace hswlm
