#include "hswlm/io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hswlm {

std::string format_sig(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

void write_models(std::ostream& out, const ModelSet& models,
                  const std::vector<std::string>& entity_order) {
  for (const auto& id : entity_order) {
    const SparseLM& model = models.models.at(id);
    out << "{\"entity\": " << quote(id) << ", \"terms\": [";
    bool first = true;
    for (const auto& [term, p] : top_k(model, model.support_size())) {
      if (!first) out << ", ";
      first = false;
      out << '[' << quote(term) << ", " << format_sig(p) << ']';
    }
    out << "]}\n";
  }
}

std::string models_to_string(const ModelSet& models,
                             const std::vector<std::string>& entity_order) {
  std::ostringstream out;
  write_models(out, models, entity_order);
  return out.str();
}

ModelSet read_models(std::istream& in) {
  ModelSet ms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(ParseError::Kind::BadRecord, "",
                       "model line " + std::to_string(lineno) + ": " +
                           ex.what());
    }
    if (!doc.is_object() || !doc.contains("entity") ||
        !doc["entity"].is_string() || !doc.contains("terms") ||
        !doc["terms"].is_array())
      throw ParseError(ParseError::Kind::BadRecord, "",
                       "model line " + std::to_string(lineno) +
                           ": expected {\"entity\", \"terms\"}");
    std::string id = doc["entity"].get<std::string>();
    std::vector<SparseLM::Entry> weights;
    for (const auto& pair : doc["terms"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_number())
        throw ParseError(ParseError::Kind::BadRecord, id,
                         "model line " + std::to_string(lineno) +
                             ": terms must be [term, prob] pairs");
      weights.emplace_back(pair[0].get<std::string>(), pair[1].get<double>());
    }
    if (!ms.models.emplace(id, SparseLM::from_weights(std::move(weights), id))
             .second)
      throw ParseError(ParseError::Kind::DuplicateId, id,
                       "model file lists entity '" + id + "' twice");
  }
  return ms;
}

void write_trace_tsv(std::ostream& out, const EstimationTrace& trace) {
  out << "iteration\tstage\tentity\tl1_change\tsupport_size\n";
  for (const auto& rec : trace.records)
    out << rec.iteration << '\t' << rec.stage << '\t' << rec.entity << '\t'
        << format_sig(rec.l1_change) << '\t' << rec.support_size << '\n';
}

namespace {

nlohmann::ordered_json hierarchy_node(const Hierarchy& h,
                                      const std::string& id) {
  nlohmann::ordered_json node;
  node["id"] = id;
  const Entity& e = h.entity(id);
  if (!e.children.empty()) {
    auto& children = node["children"] = nlohmann::ordered_json::array();
    for (const auto& child : e.children)
      children.push_back(hierarchy_node(h, child));
  }
  return node;
}

}  // namespace

std::string hierarchy_to_json(const Hierarchy& hierarchy) {
  return hierarchy_node(hierarchy, hierarchy.root()).dump(2) + "\n";
}

std::string documents_to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const auto& doc : corpus.documents()) {
    std::string text;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i) text.push_back(' ');
      text += doc.tokens[i];
    }
    out << "{\"id\": " << quote(doc.id) << ", \"entity\": " << quote(doc.owner)
        << ", \"text\": " << quote(text) << "}\n";
  }
  return out.str();
}

std::vector<DocRecord> parse_doc_records(std::string_view text) {
  std::vector<DocRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(ParseError::Kind::BadRecord, "",
                       "document line " + std::to_string(lineno) + ": " +
                           ex.what());
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() ||
        !doc.contains("entity") || !doc["entity"].is_string() ||
        !doc.contains("text") || !doc["text"].is_string())
      throw ParseError(ParseError::Kind::BadRecord, "",
                       "document line " + std::to_string(lineno) +
                           ": expected {\"id\", \"entity\", \"text\"}");
    records.push_back(DocRecord{doc["id"].get<std::string>(),
                                doc["entity"].get<std::string>(),
                                doc["text"].get<std::string>()});
  }
  return records;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.config) cfg[key] = value;
  auto& digests = j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [path, digest] : manifest.input_digests)
    digests[path] = digest;
  j["seed"] = manifest.seed;
  j["version"] = manifest.version;
  j["duration_ms"] = manifest.duration_ms;
  return j.dump(2) + "\n";
}

}  // namespace hswlm
