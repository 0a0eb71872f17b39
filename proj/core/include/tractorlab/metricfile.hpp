#pragma once

#include <optional>

#include "tractorlab/walker.hpp"

namespace tractorlab {

/// Parse/validation failure with the 1-based source line.
class MetricFileError : public std::runtime_error {
 public:
  MetricFileError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Parsed metric definition file. Line-oriented statements, one per line,
/// each terminated by `;`; `#` starts a comment line.
///
///   chart x1 x2 ... ;          coordinate names (must come first)
///   bounds xi lo hi ;          sampling box of a coordinate
///   signature p q ;            p = negative, q = positive directions
///   g i j = <expr> ;           metric entry, 1-based; symmetry auto-filled,
///                              unset entries zero
///   walker r ;                 Walker normal form of rank r; blocks follow as
///   A i j = <expr> ;           A/H/B entries (unset zero)
///   pure_walker m [omit_z] ;   pure-spinor normal form; `g i j` then means
///                              the m×m block g_ij
///   spinor <expr>, ..., <expr> ;  spinor components in the engine frame
struct MetricDocument {
  ChartPtr chart;
  int p = -1, q = -1;                       // -1: signature not declared
  std::vector<std::vector<Expr>> g;         // direct entries (or pure g_ij)
  std::optional<int> walker_r;
  std::vector<std::vector<Expr>> A, H, B;   // walker blocks
  std::optional<int> pure_m;
  bool omit_z = false;
  std::vector<Expr> spinor;                 // empty when absent
};

MetricDocument parse_metric_file(const std::string& text);

/// Writers for round-tripping generator specs through the file format.
std::string to_metric_file(const WalkerSpec& spec);
std::string to_metric_file(const PureWalkerSpec& spec);

/// Built geometry of a document. The frame/representation/spinor slots are
/// only populated when the document requests them (spinor stanza) or the
/// build produces them (pure_walker).
struct RealizedMetric {
  MetricPtr g;
  std::optional<Distribution> L;            // walker / pure-walker only
  std::optional<PureWalkerBuild> pure;
  FramePtr frame;
  std::shared_ptr<const CliffordRep> rep;
  std::optional<SpinorField> spinor;
};

RealizedMetric realize(const MetricDocument& doc, const CheckOptions& opt = {});

}  // namespace tractorlab
