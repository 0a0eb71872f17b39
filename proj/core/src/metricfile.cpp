#include "tractorlab/metricfile.hpp"

#include <sstream>

namespace tractorlab {

namespace {

struct Entry {
  int i = 0, j = 0;
  Expr value;
  int line = 0;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& tok, int line, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw MetricFileError(std::string("expected an integer ") + what + ", got '" + tok + "'",
                          line);
  }
}

double parse_double(const std::string& tok, int line, const char* what) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw MetricFileError(std::string("expected a number ") + what + ", got '" + tok + "'",
                          line);
  }
}

Expr parse_entry_expr(const std::string& src, const ChartPtr& chart, int line) {
  try {
    return parse_expr(trim(src), chart);
  } catch (const ParseError& e) {
    throw MetricFileError(std::string("bad expression: ") + e.what(), line);
  }
}

// Entry statement "<kw> i j = <expr>"; head is the part before '='.
Entry read_entry(const std::vector<std::string>& head, const std::string& rhs,
                 const ChartPtr& chart, int line) {
  if (!chart) throw MetricFileError("entry before the chart declaration", line);
  if (head.size() != 3)
    throw MetricFileError("expected '" + head[0] + " i j = <expr> ;'", line);
  Entry e;
  e.i = parse_int(head[1], line, "index");
  e.j = parse_int(head[2], line, "index");
  e.value = parse_entry_expr(rhs, chart, line);
  e.line = line;
  return e;
}

std::vector<std::vector<Expr>> assemble(const std::vector<Entry>& entries, int rows, int cols,
                                        bool symmetric, const ChartPtr& chart,
                                        const char* what) {
  std::vector<std::vector<Expr>> m{size_t(rows), std::vector<Expr>{size_t(cols), Expr()}};
  for (auto& row : m)
    for (Expr& e : row) e = zero_expr(chart);
  std::vector<std::vector<bool>> set(size_t(rows), std::vector<bool>(size_t(cols), false));
  for (const Entry& e : entries) {
    if (e.i < 1 || e.i > rows || e.j < 1 || e.j > cols)
      throw MetricFileError(std::string(what) + " index out of range", e.line);
    size_t i = size_t(e.i - 1), j = size_t(e.j - 1);
    auto conflicting = [&](const Expr& prev) {
      return !identical(prev, e.value) && !simplify(prev - e.value).is_zero();
    };
    if (set[i][j] && conflicting(m[i][j]))
      throw MetricFileError(std::string("conflicting entries for ") + what, e.line);
    m[i][j] = e.value;
    set[i][j] = true;
    if (symmetric && i != j) {
      if (set[j][i] && conflicting(m[j][i]))
        throw MetricFileError(std::string("conflicting symmetric entries for ") + what,
                              e.line);
      m[j][i] = e.value;
      set[j][i] = true;
    }
  }
  return m;
}

}  // namespace

MetricDocument parse_metric_file(const std::string& text) {
  MetricDocument doc;
  std::vector<Entry> eg, ea, eh, eb;
  std::vector<std::tuple<std::string, double, double, int>> bounds;
  std::shared_ptr<Chart> chart_mut;
  int spinor_line = 0;
  std::vector<std::string> spinor_srcs;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.back() != ';') throw MetricFileError("statement does not end with ';'", line);
    s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) continue;

    size_t eq = s.find('=');
    std::string head_src = eq == std::string::npos ? s : s.substr(0, eq);
    std::vector<std::string> head = split_ws(head_src);
    if (head.empty()) throw MetricFileError("empty statement", line);
    const std::string& kw = head[0];

    if (kw == "chart") {
      if (doc.chart) throw MetricFileError("duplicate chart declaration", line);
      if (head.size() < 2) throw MetricFileError("chart needs coordinate names", line);
      std::vector<std::string> names(head.begin() + 1, head.end());
      for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
          if (names[i] == names[j])
            throw MetricFileError("duplicate coordinate name '" + names[i] + "'", line);
      chart_mut = std::make_shared<Chart>(names);
      doc.chart = chart_mut;
    } else if (kw == "bounds") {
      if (head.size() != 4) throw MetricFileError("expected 'bounds xi lo hi ;'", line);
      bounds.emplace_back(head[1], parse_double(head[2], line, "bound"),
                          parse_double(head[3], line, "bound"), line);
    } else if (kw == "signature") {
      if (head.size() != 3) throw MetricFileError("expected 'signature p q ;'", line);
      doc.p = parse_int(head[1], line, "signature count");
      doc.q = parse_int(head[2], line, "signature count");
      if (doc.p < 0 || doc.q < 0)
        throw MetricFileError("signature counts must be non-negative", line);
    } else if (kw == "walker") {
      if (doc.walker_r || doc.pure_m)
        throw MetricFileError("duplicate normal-form declaration", line);
      if (head.size() != 2) throw MetricFileError("expected 'walker r ;'", line);
      doc.walker_r = parse_int(head[1], line, "rank");
    } else if (kw == "pure_walker") {
      if (doc.walker_r || doc.pure_m)
        throw MetricFileError("duplicate normal-form declaration", line);
      if (head.size() < 2 || head.size() > 3)
        throw MetricFileError("expected 'pure_walker m [omit_z] ;'", line);
      doc.pure_m = parse_int(head[1], line, "rank");
      if (head.size() == 3) {
        if (head[2] != "omit_z")
          throw MetricFileError("unknown pure_walker flag '" + head[2] + "'", line);
        doc.omit_z = true;
      }
    } else if (kw == "g" || kw == "A" || kw == "H" || kw == "B") {
      if (eq == std::string::npos)
        throw MetricFileError("expected '" + kw + " i j = <expr> ;'", line);
      Entry e = read_entry(head, s.substr(eq + 1), doc.chart, line);
      (kw == "g" ? eg : kw == "A" ? ea : kw == "H" ? eh : eb).push_back(e);
    } else if (kw == "spinor") {
      if (!doc.chart) throw MetricFileError("spinor before the chart declaration", line);
      if (!spinor_srcs.empty()) throw MetricFileError("duplicate spinor stanza", line);
      std::string body = trim(s.substr(kw.size()));
      spinor_line = line;
      size_t start = 0;
      while (true) {
        size_t comma = body.find(',', start);
        spinor_srcs.push_back(body.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else {
      throw MetricFileError("unknown keyword '" + kw + "'", line);
    }
  }

  if (!doc.chart) throw MetricFileError("no chart declaration", 1);
  int n = doc.chart->dim();
  for (auto& [name, lo, hi, bline] : bounds) {
    int idx = doc.chart->index(name);
    if (idx < 0) throw MetricFileError("bounds for unknown coordinate '" + name + "'", bline);
    if (!(lo < hi)) throw MetricFileError("empty bounds interval", bline);
    chart_mut->set_bounds(idx, lo, hi);
  }

  if (doc.walker_r) {
    int r = *doc.walker_r;
    if (r < 1 || n < 2 * r) throw MetricFileError("walker rank out of range for the chart", 1);
    int mid = n - 2 * r;
    doc.A = assemble(ea, mid, mid, true, doc.chart, "A");
    doc.H = assemble(eh, mid, r, false, doc.chart, "H");
    doc.B = assemble(eb, r, r, true, doc.chart, "B");
    if (!eg.empty()) throw MetricFileError("direct g entries in a walker document", eg[0].line);
  } else if (doc.pure_m) {
    int m = *doc.pure_m;
    if (m < 1) throw MetricFileError("pure_walker rank must be positive", 1);
    doc.g = assemble(eg, m, m, true, doc.chart, "g");
    if (!ea.empty() || !eh.empty() || !eb.empty())
      throw MetricFileError("walker block entries in a pure_walker document", 1);
  } else {
    doc.g = assemble(eg, n, n, true, doc.chart, "g");
    if (!ea.empty() || !eh.empty() || !eb.empty())
      throw MetricFileError("walker block entries without a walker declaration", 1);
  }

  for (const std::string& src : spinor_srcs)
    doc.spinor.push_back(parse_entry_expr(src, doc.chart, spinor_line));
  return doc;
}

namespace {

void write_chart(std::ostream& out, const ChartPtr& chart) {
  out << "chart";
  for (const std::string& nm : chart->names()) out << ' ' << nm;
  out << " ;\n";
  for (int i = 0; i < chart->dim(); ++i)
    if (chart->has_bounds(i)) {
      auto [lo, hi] = chart->bounds(i);
      out << "bounds " << chart->name(i) << ' ' << lo << ' ' << hi << " ;\n";
    }
}

void write_block(std::ostream& out, const char* kw,
                 const std::vector<std::vector<Expr>>& m, bool symmetric) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = symmetric ? i : 0; j < m[i].size(); ++j)
      if (!m[i][j].is_zero())
        out << kw << ' ' << (i + 1) << ' ' << (j + 1) << " = " << m[i][j].str() << " ;\n";
}

}  // namespace

std::string to_metric_file(const WalkerSpec& spec) {
  std::ostringstream out;
  write_chart(out, spec.chart);
  out << "walker " << spec.r << " ;\n";
  write_block(out, "A", spec.A, true);
  write_block(out, "H", spec.H, false);
  write_block(out, "B", spec.B, true);
  return out.str();
}

std::string to_metric_file(const PureWalkerSpec& spec) {
  std::ostringstream out;
  write_chart(out, spec.chart);
  out << "pure_walker " << spec.m << (spec.omit_z ? " omit_z" : "") << " ;\n";
  write_block(out, "g", spec.gij, true);
  return out.str();
}

RealizedMetric realize(const MetricDocument& doc, const CheckOptions& opt) {
  RealizedMetric out;
  int n = doc.chart->dim();
  if (doc.walker_r) {
    WalkerSpec spec{n, *doc.walker_r, doc.chart, doc.A, doc.H, doc.B, {}};
    WalkerBuild w = build_walker(spec);
    out.g = w.g;
    out.L = w.L;
  } else if (doc.pure_m) {
    PureWalkerSpec spec{*doc.pure_m, doc.omit_z, doc.chart, doc.g, {}};
    PureWalkerBuild b = build_pure_walker(spec, opt);
    out.g = b.g;
    out.L = b.L;
    out.frame = b.frame;
    out.rep = b.rep;
    out.pure = std::move(b);
  } else {
    if (doc.p < 0 || doc.q < 0)
      throw MetricFileError("a direct metric needs a signature declaration", 1);
    if (doc.p + doc.q != n)
      throw MetricFileError("signature does not add up to the chart dimension", 1);
    out.g = std::make_shared<ChartMetric>(doc.chart, doc.g, doc.p, doc.q);
    if (!out.g->signature_ok(chart_center(doc.chart)))
      throw MetricFileError("declared signature does not match the metric at the chart center",
                            1);
  }
  if (doc.p >= 0 && (out.g->p() != doc.p || out.g->q() != doc.q))
    throw MetricFileError("declared signature does not match the built normal form", 1);

  if (!doc.spinor.empty()) {
    if (!out.frame) out.frame = build_frame(out.g, chart_center(doc.chart));
    if (!out.rep)
      out.rep = std::make_shared<const CliffordRep>(build_clifford(out.g->p(), out.g->q()));
    if (int(doc.spinor.size()) != out.rep->N)
      throw MetricFileError("spinor component count does not match the module dimension", 1);
    out.spinor = make_spinor_field(out.g, out.rep, out.frame, doc.spinor);
  }
  return out;
}

}  // namespace tractorlab
