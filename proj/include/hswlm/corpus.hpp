#ifndef HSWLM_CORPUS_HPP
#define HSWLM_CORPUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hswlm/errors.hpp"

namespace hswlm {

// One node of the entity tree. `layer` is the depth from the root (root = 0).
struct Entity {
  std::string id;
  std::optional<std::string> parent;
  std::vector<std::string> children;
  int layer = 0;

  bool operator==(const Entity&) const = default;
};

// Rooted tree of entities. Immutable once built; depth/height and the
// breadth-first order are precomputed so navigation queries are lookups.
class Hierarchy {
 public:
  // Validates and links a flat entity list (ids + parent references; children
  // and layers are derived). Child order follows the input order.
  // Throws ParseError on duplicate ids, multiple roots, cycles, or parent
  // references to undeclared entities.
  static Hierarchy build(std::vector<Entity> entities);

  const std::string& root() const { return root_; }
  std::size_t size() const { return entities_.size(); }
  bool contains(const std::string& id) const { return index_.count(id) > 0; }
  const Entity& entity(const std::string& id) const;

  int depth(const std::string& id) const { return entity(id).layer; }
  int height(const std::string& id) const;
  bool is_leaf(const std::string& id) const { return entity(id).children.empty(); }

  // All entity ids, root first, breadth-first, siblings in declared order.
  const std::vector<std::string>& bfs_order() const { return bfs_order_; }

  // The unique ancestor exactly l edges above; requires 1 <= l <= depth(id).
  const std::string& ancestor_at(const std::string& id, int l) const;

  // All descendants exactly l edges below, in breadth-first document order;
  // requires 1 <= l <= height(id).
  std::vector<std::string> descendants_at(const std::string& id, int l) const;

  // Leaves of the subtree rooted at id (id itself when it is a leaf).
  std::vector<std::string> leaves_under(const std::string& id) const;

  // Structural equality: same root, same breadth-first sequence, same links.
  // Storage order of the flat entity list does not matter.
  bool operator==(const Hierarchy& other) const;

 private:
  Hierarchy() = default;

  std::vector<Entity> entities_;  // in input order
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<int> heights_;  // parallel to entities_
  std::vector<std::string> bfs_order_;
  std::string root_;
};

struct Document {
  std::string id;
  std::string owner;  // leaf entity id
  std::vector<std::string> tokens;

  std::size_t token_count() const { return tokens.size(); }
  bool operator==(const Document&) const = default;
};

// One line of a documents file.
struct DocRecord {
  std::string id;
  std::string entity;
  std::string text;
};

// Hierarchy plus tokenized documents bound to its leaves. Immutable after
// construction; safe to share across threads.
class Corpus {
 public:
  Corpus(Hierarchy hierarchy, std::vector<Document> documents);

  const Hierarchy& hierarchy() const { return hierarchy_; }
  const std::vector<Document>& documents() const { return documents_; }
  // Sorted distinct terms over all documents.
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  // Indices into documents() owned by a leaf (empty for doc-less leaves).
  const std::vector<std::size_t>& docs_of(const std::string& leaf_id) const;

  // Total tokens in all documents under the entity's subtree.
  std::int64_t pooled_tokens(const std::string& entity_id) const;

  // Term counts pooled over all documents under the entity's subtree,
  // sorted by term.
  std::vector<std::pair<std::string, std::int64_t>> pooled_counts(
      const std::string& entity_id) const;

  bool operator==(const Corpus& other) const {
    return hierarchy_ == other.hierarchy_ && documents_ == other.documents_;
  }

 private:
  Hierarchy hierarchy_;
  std::vector<Document> documents_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_leaf_;
  std::vector<std::size_t> no_docs_;
};

// Parses a hierarchy description. Two formats are accepted and detected from
// the first non-space byte: a nested JSON object {"id": ..., "children":
// [...]} or a TSV edge list with "child<TAB>parent" lines (a line holding a
// bare id declares a root explicitly).
Hierarchy parse_hierarchy(std::string_view text);

// Splits on Unicode whitespace, lowercases ASCII letters, and strips leading
// and trailing punctuation from each token. No stemming, no stopword removal.
std::vector<std::string> tokenize(std::string_view text);

// Tokenizes records and binds them to hierarchy leaves. Throws ParseError on
// unknown or non-leaf entities and duplicate document ids.
Corpus ingest_documents(const std::vector<DocRecord>& records,
                        const Hierarchy& hierarchy);

// Removes leaves whose pooled token count is below min_tokens, together with
// their documents; internal nodes left childless are pruned too (the root is
// always kept). min_tokens == 0 returns the corpus unchanged.
Corpus filter_short_leaves(const Corpus& corpus, std::int64_t min_tokens = 100);

// Switches to document granularity: every document becomes its own leaf
// (id = document id) under its former owner.
Corpus explode_document_leaves(const Corpus& corpus);

}  // namespace hswlm

#endif  // HSWLM_CORPUS_HPP
