#ifndef HSWLM_IO_HPP
#define HSWLM_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hswlm/corpus.hpp"
#include "hswlm/hswlm.hpp"
#include "hswlm/langmodel.hpp"

namespace hswlm {

// Locale-independent rendering with 12 significant digits; used for every
// probability and weight the tool writes.
std::string format_sig(double value);

// FNV-1a 64-bit digest, rendered as 16 hex digits; good enough to fingerprint
// inputs in run manifests.
std::string fnv1a64_hex(std::string_view bytes);

// Model files: one JSON object per line, terms sorted by descending
// probability: {"entity": ..., "terms": [[term, prob], ...]}.
void write_models(std::ostream& out, const ModelSet& models,
                  const std::vector<std::string>& entity_order);
std::string models_to_string(const ModelSet& models,
                             const std::vector<std::string>& entity_order);
ModelSet read_models(std::istream& in);

void write_trace_tsv(std::ostream& out, const EstimationTrace& trace);

// Corpus files: nested-object hierarchy JSON and JSONL document records.
std::string hierarchy_to_json(const Hierarchy& hierarchy);
std::string documents_to_jsonl(const Corpus& corpus);
std::vector<DocRecord> parse_doc_records(std::string_view text);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // flag -> value
  std::map<std::string, std::string> input_digests;         // path -> digest
  std::uint64_t seed = 0;
  std::string version;
  double duration_ms = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace hswlm

#endif  // HSWLM_IO_HPP
