#pragma once

#include "tractorlab/metricfile.hpp"

namespace tractorlab {

/// Shipped example metric, stored as metric-file source so the catalog
/// round-trips through the parser.
struct CorpusEntry {
  std::string name;
  std::string description;
  int p = 0, q = 0;
  std::vector<std::string> witnesses;  // theorem tags this entry exercises
  std::string definition;
};

const std::vector<CorpusEntry>& corpus();

/// Throws std::invalid_argument for an unknown name.
const CorpusEntry& corpus_entry(const std::string& name);

}  // namespace tractorlab
