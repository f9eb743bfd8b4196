#include "hswlm/corpus.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace hswlm {

namespace {

[[noreturn]] void parse_fail(ParseError::Kind kind, const std::string& id,
                             const std::string& msg) {
  throw ParseError(kind, id, msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Hierarchy

Hierarchy Hierarchy::build(std::vector<Entity> entities) {
  Hierarchy h;
  if (entities.empty())
    parse_fail(ParseError::Kind::NoRoot, "", "hierarchy has no entities");

  h.entities_ = std::move(entities);
  for (std::size_t i = 0; i < h.entities_.size(); ++i) {
    auto& e = h.entities_[i];
    e.children.clear();
    if (!h.index_.emplace(e.id, i).second)
      parse_fail(ParseError::Kind::DuplicateId, e.id,
                 "duplicate entity id '" + e.id + "'");
  }

  std::vector<std::string> roots;
  for (const auto& e : h.entities_) {
    if (!e.parent) {
      roots.push_back(e.id);
      continue;
    }
    auto it = h.index_.find(*e.parent);
    if (it == h.index_.end())
      parse_fail(ParseError::Kind::DanglingParent, *e.parent,
                 "entity '" + e.id + "' references undeclared parent '" +
                     *e.parent + "'");
    h.entities_[it->second].children.push_back(e.id);
  }

  if (roots.size() > 1)
    parse_fail(ParseError::Kind::MultipleRoots, roots[1],
               "multiple roots: '" + roots[0] + "' and '" + roots[1] + "'");
  if (roots.empty()) {
    // Every entity has a parent, so some parent chain must loop. Walk one
    // until an id repeats and name it.
    std::unordered_set<std::string> seen;
    const Entity* cur = &h.entities_.front();
    while (seen.insert(cur->id).second) cur = &h.entities_[h.index_.at(*cur->parent)];
    parse_fail(ParseError::Kind::Cycle, cur->id,
               "cycle through entity '" + cur->id + "'");
  }
  h.root_ = roots.front();

  // Depths + reachability in one breadth-first sweep.
  h.bfs_order_.reserve(h.entities_.size());
  std::deque<std::string> queue{h.root_};
  h.entities_[h.index_.at(h.root_)].layer = 0;
  while (!queue.empty()) {
    std::string id = std::move(queue.front());
    queue.pop_front();
    h.bfs_order_.push_back(id);
    const Entity& e = h.entities_[h.index_.at(id)];
    for (const auto& child : e.children) {
      h.entities_[h.index_.at(child)].layer = e.layer + 1;
      queue.push_back(child);
    }
  }
  if (h.bfs_order_.size() != h.entities_.size()) {
    std::unordered_set<std::string> reached(h.bfs_order_.begin(),
                                            h.bfs_order_.end());
    for (const auto& e : h.entities_)
      if (!reached.count(e.id))
        parse_fail(ParseError::Kind::Cycle, e.id,
                   "entity '" + e.id + "' is not reachable from the root");
  }

  // Heights bottom-up: reverse BFS order visits children before parents.
  h.heights_.assign(h.entities_.size(), 0);
  for (auto it = h.bfs_order_.rbegin(); it != h.bfs_order_.rend(); ++it) {
    const Entity& e = h.entities_[h.index_.at(*it)];
    int best = -1;
    for (const auto& child : e.children)
      best = std::max(best, h.heights_[h.index_.at(child)]);
    h.heights_[h.index_.at(*it)] = best + 1;
  }
  return h;
}

bool Hierarchy::operator==(const Hierarchy& other) const {
  if (root_ != other.root_ || bfs_order_ != other.bfs_order_) return false;
  for (const auto& id : bfs_order_)
    if (!(entity(id) == other.entity(id))) return false;
  return true;
}

const Entity& Hierarchy::entity(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    parse_fail(ParseError::Kind::UnknownEntity, id,
               "unknown entity '" + id + "'");
  return entities_[it->second];
}

int Hierarchy::height(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    parse_fail(ParseError::Kind::UnknownEntity, id,
               "unknown entity '" + id + "'");
  return heights_[it->second];
}

const std::string& Hierarchy::ancestor_at(const std::string& id, int l) const {
  const Entity* cur = &entity(id);
  if (l < 1 || l > cur->layer)
    throw std::invalid_argument("ancestor distance " + std::to_string(l) +
                                " out of range for entity '" + id +
                                "' at depth " + std::to_string(cur->layer));
  for (int i = 0; i < l; ++i) cur = &entity(*cur->parent);
  return cur->id;
}

std::vector<std::string> Hierarchy::descendants_at(const std::string& id,
                                                   int l) const {
  if (l < 1 || l > height(id))
    throw std::invalid_argument("descendant distance " + std::to_string(l) +
                                " out of range for entity '" + id +
                                "' of height " + std::to_string(height(id)));
  std::vector<std::string> frontier{id};
  for (int step = 0; step < l; ++step) {
    std::vector<std::string> next;
    for (const auto& eid : frontier) {
      const auto& children = entity(eid).children;
      next.insert(next.end(), children.begin(), children.end());
    }
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<std::string> Hierarchy::leaves_under(const std::string& id) const {
  std::vector<std::string> leaves;
  std::deque<std::string> queue{entity(id).id};
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    const Entity& e = entity(cur);
    if (e.children.empty())
      leaves.push_back(cur);
    else
      queue.insert(queue.end(), e.children.begin(), e.children.end());
  }
  return leaves;
}

// ---------------------------------------------------------------------------
// Tokenizer
//
// The split is on Unicode whitespace; casing and punctuation handling are
// ASCII plus a few common typographic marks. Both sets are fixed here so that
// tokenization is deterministic and locale-independent.

namespace {

bool is_space_cp(char32_t c) {
  if (c == 0x09 || c == 0x0A || c == 0x0B || c == 0x0C || c == 0x0D ||
      c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680)
    return true;
  if (c >= 0x2000 && c <= 0x200A) return true;
  return c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
         c == 0x3000;
}

bool is_strip_punct_cp(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xAB:    // «
    case 0xBB:    // »
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2026:  // ellipsis
      return true;
    default:
      return c >= 0x2018 && c <= 0x201F;  // curly quotes
  }
}

// Decodes one UTF-8 code point at position i; on malformed input the single
// byte is passed through as if it were Latin-1. Returns the byte length used.
std::size_t decode_cp(std::string_view s, std::size_t i, char32_t* cp) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  char32_t c = 0;
  if (b0 < 0x80) {
    *cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    c = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    c = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    c = b0 & 0x07;
  } else {
    *cp = b0;
    return 1;
  }
  if (i + len > s.size()) {
    *cp = b0;
    return 1;
  }
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) {
      *cp = b0;
      return 1;
    }
    c = (c << 6) | (bk & 0x3F);
  }
  *cp = c;
  return len;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  // Code points of the current run with their raw bytes, so non-ASCII text
  // survives untouched.
  std::vector<std::pair<char32_t, std::string>> run;

  auto flush = [&] {
    if (run.empty()) return;
    std::size_t b = 0, e = run.size();
    while (b < e && is_strip_punct_cp(run[b].first)) ++b;
    while (e > b && is_strip_punct_cp(run[e - 1].first)) --e;
    if (b == e) {
      run.clear();
      return;
    }
    std::string tok;
    for (std::size_t i = b; i < e; ++i) {
      char32_t c = run[i].first;
      if (c >= 'A' && c <= 'Z')
        tok.push_back(static_cast<char>(c - 'A' + 'a'));
      else
        tok += run[i].second;
    }
    tokens.push_back(std::move(tok));
    run.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp;
    std::size_t len = decode_cp(text, i, &cp);
    if (is_space_cp(cp))
      flush();
    else
      run.emplace_back(cp, std::string(text.substr(i, len)));
    i += len;
  }
  flush();
  return tokens;
}

// ---------------------------------------------------------------------------
// Hierarchy parsing

namespace {

void collect_json_entities(const nlohmann::json& node,
                           const std::optional<std::string>& parent,
                           std::vector<Entity>* out) {
  if (!node.is_object() || !node.contains("id") || !node["id"].is_string())
    parse_fail(ParseError::Kind::BadRecord, "",
               "hierarchy node must be an object with a string 'id'");
  Entity e;
  e.id = node["id"].get<std::string>();
  e.parent = parent;
  out->push_back(e);
  if (node.contains("children")) {
    if (!node["children"].is_array())
      parse_fail(ParseError::Kind::BadRecord, e.id,
                 "'children' of '" + e.id + "' must be an array");
    for (const auto& child : node["children"])
      collect_json_entities(child, e.id, out);
  }
}

Hierarchy parse_hierarchy_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    parse_fail(ParseError::Kind::BadRecord, "",
               std::string("hierarchy JSON: ") + ex.what());
  }
  std::vector<Entity> entities;
  collect_json_entities(doc, std::nullopt, &entities);
  return Hierarchy::build(std::move(entities));
}

// Edge-list format: "child<TAB>parent" per line; a line with a bare id
// declares a root. With an explicit root declaration every parent must be
// declared somewhere; without one, a single undeclared parent is taken as
// the implicit root.
Hierarchy parse_hierarchy_tsv(std::string_view text) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::optional<std::string>> decls;
  std::vector<std::pair<std::string, std::string>> edges;
  bool explicit_root = false;

  auto declare = [&](const std::string& id,
                     std::optional<std::string> parent) {
    auto [it, fresh] = decls.emplace(id, std::move(parent));
    if (!fresh)
      parse_fail(ParseError::Kind::DuplicateId, id,
                 "duplicate entity id '" + id + "'");
    order.push_back(id);
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      declare(line, std::nullopt);
      explicit_root = true;
    } else {
      std::string child = line.substr(0, tab);
      std::string parent = line.substr(tab + 1);
      if (child.empty() || parent.empty())
        parse_fail(ParseError::Kind::BadRecord, child,
                   "malformed edge line: '" + line + "'");
      declare(child, parent);
      edges.emplace_back(child, parent);
    }
  }

  // Parents that never got declared: the implicit root, or dangling ids.
  std::vector<std::string> undeclared;
  for (const auto& [child, parent] : edges) {
    if (!decls.count(parent) &&
        std::find(undeclared.begin(), undeclared.end(), parent) ==
            undeclared.end())
      undeclared.push_back(parent);
  }
  if (explicit_root) {
    if (!undeclared.empty())
      parse_fail(ParseError::Kind::DanglingParent, undeclared.front(),
                 "parent '" + undeclared.front() + "' is never declared");
  } else {
    for (const auto& id : undeclared) {
      decls.emplace(id, std::nullopt);
      order.push_back(id);
    }
  }

  std::vector<Entity> entities;
  entities.reserve(order.size());
  for (const auto& id : order) {
    Entity e;
    e.id = id;
    e.parent = decls.at(id);
    entities.push_back(std::move(e));
  }
  return Hierarchy::build(std::move(entities));
}

}  // namespace

Hierarchy parse_hierarchy(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    parse_fail(ParseError::Kind::NoRoot, "", "empty hierarchy description");
  if (text[first] == '{') return parse_hierarchy_json(text);
  return parse_hierarchy_tsv(text);
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(Hierarchy hierarchy, std::vector<Document> documents)
    : hierarchy_(std::move(hierarchy)), documents_(std::move(documents)) {
  std::set<std::string> vocab;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (!hierarchy_.contains(d.owner))
      parse_fail(ParseError::Kind::UnknownEntity, d.owner,
                 "document '" + d.id + "' references unknown entity '" +
                     d.owner + "'");
    if (!hierarchy_.is_leaf(d.owner))
      parse_fail(ParseError::Kind::NotALeaf, d.owner,
                 "document '" + d.id + "' is bound to non-leaf entity '" +
                     d.owner + "'");
    by_leaf_[d.owner].push_back(i);
    vocab.insert(d.tokens.begin(), d.tokens.end());
  }
  vocabulary_.assign(vocab.begin(), vocab.end());
}

const std::vector<std::size_t>& Corpus::docs_of(
    const std::string& leaf_id) const {
  auto it = by_leaf_.find(leaf_id);
  return it == by_leaf_.end() ? no_docs_ : it->second;
}

std::int64_t Corpus::pooled_tokens(const std::string& entity_id) const {
  std::int64_t total = 0;
  for (const auto& leaf : hierarchy_.leaves_under(entity_id))
    for (std::size_t idx : docs_of(leaf))
      total += static_cast<std::int64_t>(documents_[idx].token_count());
  return total;
}

std::vector<std::pair<std::string, std::int64_t>> Corpus::pooled_counts(
    const std::string& entity_id) const {
  std::map<std::string, std::int64_t> counts;
  for (const auto& leaf : hierarchy_.leaves_under(entity_id))
    for (std::size_t idx : docs_of(leaf))
      for (const auto& tok : documents_[idx].tokens) ++counts[tok];
  return {counts.begin(), counts.end()};
}

Corpus ingest_documents(const std::vector<DocRecord>& records,
                        const Hierarchy& hierarchy) {
  std::unordered_set<std::string> seen;
  std::vector<Document> docs;
  docs.reserve(records.size());
  for (const auto& rec : records) {
    if (!seen.insert(rec.id).second)
      parse_fail(ParseError::Kind::DuplicateDoc, rec.id,
                 "duplicate document id '" + rec.id + "'");
    if (!hierarchy.contains(rec.entity))
      parse_fail(ParseError::Kind::UnknownEntity, rec.entity,
                 "document '" + rec.id + "' references unknown entity '" +
                     rec.entity + "'");
    if (!hierarchy.is_leaf(rec.entity))
      parse_fail(ParseError::Kind::NotALeaf, rec.entity,
                 "document '" + rec.id + "' is bound to non-leaf entity '" +
                     rec.entity + "'");
    docs.push_back(Document{rec.id, rec.entity, tokenize(rec.text)});
  }
  return Corpus(hierarchy, std::move(docs));
}

Corpus filter_short_leaves(const Corpus& corpus, std::int64_t min_tokens) {
  if (min_tokens <= 0) return corpus;
  const Hierarchy& h = corpus.hierarchy();

  std::unordered_set<std::string> dropped;
  for (const auto& id : h.bfs_order()) {
    if (!h.is_leaf(id) || id == h.root()) continue;
    std::int64_t total = 0;
    for (std::size_t idx : corpus.docs_of(id))
      total += static_cast<std::int64_t>(corpus.documents()[idx].token_count());
    if (total < min_tokens) dropped.insert(id);
  }

  // Cascade: internal nodes whose children all vanished go too. Reverse BFS
  // order sees children before parents.
  const auto& order = h.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it == h.root() || h.is_leaf(*it) || dropped.count(*it)) continue;
    bool all_gone = true;
    for (const auto& child : h.entity(*it).children)
      if (!dropped.count(child)) {
        all_gone = false;
        break;
      }
    if (all_gone) dropped.insert(*it);
  }

  std::vector<Entity> kept;
  for (const auto& id : order) {
    if (dropped.count(id)) continue;
    Entity e;
    e.id = id;
    e.parent = h.entity(id).parent;
    kept.push_back(std::move(e));
  }
  std::vector<Document> docs;
  for (const auto& d : corpus.documents())
    if (!dropped.count(d.owner)) docs.push_back(d);
  return Corpus(Hierarchy::build(std::move(kept)), std::move(docs));
}

Corpus explode_document_leaves(const Corpus& corpus) {
  const Hierarchy& h = corpus.hierarchy();
  std::vector<Entity> entities;
  for (const auto& id : h.bfs_order()) {
    Entity e;
    e.id = id;
    e.parent = h.entity(id).parent;
    entities.push_back(std::move(e));
  }
  std::vector<Document> docs;
  for (const auto& d : corpus.documents()) {
    if (h.contains(d.id))
      parse_fail(ParseError::Kind::DuplicateId, d.id,
                 "document id '" + d.id + "' collides with an entity id");
    Entity e;
    e.id = d.id;
    e.parent = d.owner;
    entities.push_back(std::move(e));
    docs.push_back(Document{d.id, d.id, d.tokens});
  }
  return Corpus(Hierarchy::build(std::move(entities)), std::move(docs));
}

}  // namespace hswlm
