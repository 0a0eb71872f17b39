#include "tractorlab/corpus.hpp"

namespace tractorlab {

namespace {

std::vector<CorpusEntry> make_corpus() {
  std::vector<CorpusEntry> c;

  c.push_back({"flat_22", "flat split-signature metric on R^{2,2}", 2, 2, {},
               "chart x1 x2 x3 x4 ;\n"
               "signature 2 2 ;\n"
               "g 1 1 = -1 ;\n"
               "g 2 2 = -1 ;\n"
               "g 3 3 = 1 ;\n"
               "g 4 4 = 1 ;\n"});

  c.push_back({"walker_r1_ppwave", "rank-1 Walker pp-wave, Ricci-isotropic", 1, 2,
               {"theorem1"},
               "chart x1 x2 x3 ;\n"
               "walker 1 ;\n"
               "A 1 1 = 1 ;\n"
               "B 1 1 = x2^2 * x3 ;\n"});

  c.push_back({"walker_r2_splitwave", "rank-2 Walker wave with empty middle block", 2, 2,
               {"theorem1"},
               "chart x1 x2 x3 x4 ;\n"
               "walker 2 ;\n"
               "B 1 1 = x3^2 ;\n"
               "B 1 2 = x3 * x4 ;\n"
               "B 2 2 = x4^2 ;\n"});

  c.push_back({"walker_r3_splitwave", "rank-3 Walker wave with empty middle block", 3, 3,
               {"theorem1"},
               "chart x1 x2 x3 x4 x5 x6 ;\n"
               "walker 3 ;\n"
               "B 1 1 = x4^2 ;\n"
               "B 1 3 = x4 * x6 ;\n"
               "B 2 2 = x5^2 ;\n"
               "B 3 3 = x6^2 ;\n"});

  c.push_back({"pure_m1", "pure-spinor normal form, m=1, g11 = y1", 2, 1,
               {"theorem1", "theorem2"},
               "chart x1 y1 z ;\n"
               "pure_walker 1 ;\n"
               "g 1 1 = y1 ;\n"});

  c.push_back({"pure_m2_22", "pure-spinor normal form, m=2, divergence-free rotating block",
               2, 2, {"theorem1", "theorem2"},
               "chart x1 x2 y1 y2 ;\n"
               "pure_walker 2 omit_z ;\n"
               "g 1 1 = x2*y1 ;\n"
               "g 1 2 = -x1*y1 ;\n"
               "g 2 2 = x2*y1 ;\n"});

  c.push_back({"pure_m2_32", "pure-spinor normal form, m=2 with z", 3, 2,
               {"theorem1", "theorem2"},
               "chart x1 x2 y1 y2 z ;\n"
               "pure_walker 2 ;\n"
               "g 1 1 = y2 + z ;\n"
               "g 1 2 = y1 ;\n"
               "g 2 2 = z ;\n"});

  c.push_back({"pure_m3_33", "pure-spinor normal form, m=3, divergence-free rotating block",
               3, 3, {"theorem1", "theorem2"},
               "chart x1 x2 x3 y1 y2 y3 ;\n"
               "pure_walker 3 omit_z ;\n"
               "g 1 1 = x2*y1 ;\n"
               "g 1 2 = -x1*y1 ;\n"
               "g 2 2 = x2*y1 ;\n"
               "g 3 3 = y1 ;\n"});

  return c;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = make_corpus();
  return c;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const CorpusEntry& e : corpus())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown example '" + name + "'");
}

}  // namespace tractorlab
