#include "tractorlab/jobs.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tractorlab/tractor.hpp"

namespace tractorlab {

namespace {

constexpr const char* kEngineVersion = "0.1.0";

struct Ctx {
  RealizedMetric rm;
  CheckOptions opt;
  double rk4_step = 1e-3;
};

double param(const CommandSpec& cmd, const char* key, double fallback) {
  auto it = cmd.params.find(key);
  return it == cmd.params.end() ? fallback : it->second;
}

const SpinorField& require_spinor(const Ctx& c) {
  if (c.rm.spinor) return *c.rm.spinor;
  if (c.rm.pure) return c.rm.pure->phi;
  throw std::runtime_error("metric carries no spinor field");
}

const Distribution& require_L(const Ctx& c) {
  if (!c.rm.L) throw std::runtime_error("metric has no distinguished distribution");
  return *c.rm.L;
}

Mat eval_distribution(const Distribution& L, const Point& p, const Bindings& b) {
  Mat M(L.generators[0].dim(), L.rank());
  for (int k = 0; k < L.rank(); ++k) M.col(k) = L.generators[size_t(k)].evaluate(p, b);
  return M;
}

void cmd_curvature(Ctx& c, CommandRecord& rec) {
  const MetricPtr& g = c.rm.g;
  const CurvatureBundle& curv = g->curvature();
  PointSampler sampler(g->chart(), c.opt.seed);
  double mx = 0;
  for (int s = 0; s < c.opt.samples; ++s) {
    Point p = sampler.next();
    for (const auto& l : curv.riemann)
      for (const auto& i : l)
        for (const auto& j : i)
          for (const Expr& e : j)
            if (!e.is_zero()) mx = std::max(mx, std::abs(e.evaluate(p, g->bindings())));
  }
  rec.max_residual = mx;  // informative: curvature magnitude, not an error
  rec.pass = true;
}

void cmd_metricity(Ctx& c, CommandRecord& rec) {
  const MetricPtr& g = c.rm.g;
  const ChartPtr& ch = g->chart();
  int n = g->dim();
  std::vector<Tractor> basis;
  basis.push_back(make_tractor(g, one_expr(ch), zero_field(ch), zero_expr(ch)));
  for (int i = 0; i < n; ++i)
    basis.push_back(make_tractor(g, zero_expr(ch), coordinate_field(ch, i), zero_expr(ch)));
  basis.push_back(make_tractor(g, zero_expr(ch), zero_field(ch), one_expr(ch)));

  std::vector<Expr> residuals;
  for (size_t a = 0; a < basis.size(); ++a)
    for (size_t b = a; b < basis.size(); ++b) {
      Expr inner = tractor_inner(basis[a], basis[b]);
      for (int d = 0; d < n; ++d) {
        VectorField X = coordinate_field(ch, d);
        Expr r = differentiate(inner, d) -
                 tractor_inner(tractor_connection_apply(X, basis[a]), basis[b]) -
                 tractor_inner(basis[a], tractor_connection_apply(X, basis[b]));
        r = simplify(r);
        if (!r.is_zero()) residuals.push_back(r);
      }
    }
  PointSampler sampler(ch, c.opt.seed);
  for (int s = 0; s < c.opt.samples; ++s) {
    Point p = sampler.next();
    for (const Expr& r : residuals)
      rec.max_residual = std::max(rec.max_residual, std::abs(r.evaluate(p, g->bindings())));
  }
  rec.pass = rec.max_residual < c.opt.tolerance;
}

void cmd_holonomy(Ctx& c, CommandRecord& rec) {
  const MetricPtr& g = c.rm.g;
  Point base = chart_center(g->chart());
  TransportOptions to;
  to.step = c.rk4_step;
  HolonomySample sample = holonomy_sample(*g, base, default_loops(g->chart(), base), to);
  for (const LoopTranscript& lt : sample.loops)
    rec.max_residual = std::max(rec.max_residual, lt.gram_residual);
  rec.pass = rec.max_residual < c.opt.tolerance;
}

void cmd_ricci_isotropic(Ctx& c, CommandRecord& rec) {
  RicciIsotropicReport rep = validate_ricci_isotropic(c.rm.g, require_L(c), c.opt);
  rec.max_residual =
      std::max({rep.parallel.max_residual, rep.ricci_image.max_residual, rep.max_scal});
  rec.pass = rep.pass;
}

void cmd_certify(Ctx& c, CommandRecord& rec) {
  if (!c.rm.pure) throw std::runtime_error("metric is not a pure_walker build");
  rec.max_residual = c.rm.pure->certification.max_residual;
  rec.pass = c.rm.pure->certification.pass;
}

void cmd_twistor(Ctx& c, CommandRecord& rec) {
  CheckReport rep = check_twistor(require_spinor(c), c.opt);
  rec.max_residual = rep.max_residual;
  rec.singular_points = rep.singular_points;
  rec.pass = rep.pass;
}

void cmd_theorem1(Ctx& c, CommandRecord& rec) {
  const MetricPtr& g = c.rm.g;
  const Distribution& L = require_L(c);
  RicciIsotropicReport iso = validate_ricci_isotropic(g, L, c.opt);
  TractorDistribution H = build_H_from_L(g, L);
  CheckReport inv = verify_invariant_lightlike(g, H, c.opt);
  ProjectedDistribution proj = project_L_from_H(g, H, c.opt);
  double span_worst = proj.L.rank() == L.rank() ? 0.0 : 1.0;
  if (proj.L.rank() == L.rank()) {
    PointSampler sampler(g->chart(), c.opt.seed);
    for (int s = 0; s < 8; ++s) {
      Point p = sampler.next();
      span_worst = std::max(span_worst,
                            span_distance(eval_distribution(proj.L, p, g->bindings()),
                                          eval_distribution(L, p, g->bindings())));
    }
  }
  rec.max_residual = std::max(inv.max_residual, span_worst);
  rec.singular_points = proj.singular_points;
  rec.pass = iso.pass && inv.pass && span_worst < 1e-8;
}

void cmd_theorem2(Ctx& c, CommandRecord& rec) {
  if (!c.rm.pure) throw std::runtime_error("metric is not a pure_walker build");
  const PureWalkerBuild& b = *c.rm.pure;
  const MetricPtr& g = b.g;
  int m = std::min(g->p(), g->q());

  DInvariantReport dinv = d_invariant(b.phi, c.opt);
  auto model = build_tractor_spinor_model(g->p(), g->q());
  SpinTractorField psi = twistor_to_tractor(b.phi);
  KernelDistributionReport ker = kernel_distribution(psi, *model, c.opt);

  double worst = std::max(std::abs(dinv.min_value), std::abs(dinv.max_value));
  bool ok = dinv.identically_zero && ker.constant_rank && ker.H.rank() == m + 1 &&
            ker.residuals.pass;
  worst = std::max(worst, ker.residuals.max_residual);

  if (ok) {
    const MetricPtr& gauge = ker.H.generators[0].gauge;
    PointSampler sampler(g->chart(), c.opt.seed);
    Vec splus = Vec::Zero(g->dim() + 2);
    splus[g->dim() + 1] = 1;
    for (int s = 0; s < 8; ++s) {
      Point p = sampler.next();
      Mat cols(g->dim() + 2, ker.H.rank());
      for (int k = 0; k < ker.H.rank(); ++k)
        cols.col(k) = tractor_eval(ker.H.generators[size_t(k)], p);
      worst = std::max(worst, span_residual(cols, splus));
    }
    ok = ok && worst < c.opt.tolerance;

    CheckReport integ = check_integrable(*g, b.L, c.opt);
    ok = ok && integ.pass;
    worst = std::max(worst, integ.max_residual);

    ProjectedDistribution proj = project_L_from_H(gauge, ker.H, c.opt);
    if (proj.L.rank() != b.L.rank()) {
      ok = false;
    } else {
      for (int s = 0; s < 8; ++s) {
        Point p = sampler.next();
        double d = span_distance(eval_distribution(proj.L, p, gauge->bindings()),
                                 eval_distribution(b.L, p, gauge->bindings()));
        worst = std::max(worst, d);
        ok = ok && d < 1e-8;
      }
    }
  }
  rec.max_residual = worst;
  rec.pass = ok;
}

using CommandFn = std::function<void(Ctx&, CommandRecord&)>;

const std::map<std::string, CommandFn>& command_table() {
  static const std::map<std::string, CommandFn> table = {
      {"curvature", cmd_curvature},
      {"metricity", cmd_metricity},
      {"holonomy_sample", cmd_holonomy},
      {"ricci_isotropic", cmd_ricci_isotropic},
      {"certify_parallel_spinor", cmd_certify},
      {"twistor_check", cmd_twistor},
      {"theorem1_pipeline", cmd_theorem1},
      {"theorem2_pipeline", cmd_theorem2},
  };
  return table;
}

std::string gamma_rep_id(const RealizedMetric& rm) {
  std::shared_ptr<const CliffordRep> rep = rm.rep;
  if (!rep) {
    try {
      rep = std::make_shared<const CliffordRep>(build_clifford(rm.g->p(), rm.g->q()));
    } catch (const std::exception&) {
      return "unavailable";
    }
  }
  std::ostringstream id;
  id << "clifford(" << rep->p << ',' << rep->q << ")#" << std::hex
     << std::hash<std::string>{}(clifford_to_json(*rep));
  return id.str();
}

}  // namespace

int thread_cap() {
  if (const char* env = std::getenv("TRACTORLAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

Report run(const JobSpec& job) {
  int sources = int(!job.example.empty()) + int(!job.source.empty()) + int(!job.path.empty());
  if (sources != 1) throw JobError("exactly one metric source must be given");
  if (job.commands.empty()) throw JobError("no commands to run");
  for (const CommandSpec& cmd : job.commands)
    if (!command_table().count(cmd.name)) throw JobError("unknown command '" + cmd.name + "'");

  std::string text, name;
  if (!job.example.empty()) {
    const CorpusEntry& e = corpus_entry(job.example);
    text = e.definition;
    name = e.name;
  } else if (!job.path.empty()) {
    std::ifstream in(job.path);
    if (!in) throw JobError("cannot read metric file '" + job.path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    name = job.path;
  } else {
    text = job.source;
    name = "<inline>";
  }

  Ctx ctx;
  ctx.opt = CheckOptions{job.samples, job.tolerance, job.seed};
  ctx.rk4_step = job.rk4_step;
  ctx.rm = realize(parse_metric_file(text), ctx.opt);

  Report report;
  report.engine_version = kEngineVersion;
  report.gamma_rep_id = gamma_rep_id(ctx.rm);
  report.metric_name = name;
  report.all_pass = true;
  for (const CommandSpec& cmd : job.commands) {
    CommandRecord rec;
    rec.check = cmd.name;
    rec.params["samples"] = double(ctx.opt.samples);
    rec.params["tolerance"] = ctx.opt.tolerance;
    rec.params["seed"] = double(ctx.opt.seed);
    for (const auto& [k, v] : cmd.params) rec.params[k] = v;

    Ctx local = ctx;
    local.opt.samples = int(param(cmd, "samples", double(ctx.opt.samples)));
    local.opt.tolerance = param(cmd, "tolerance", ctx.opt.tolerance);
    local.opt.seed = std::uint64_t(param(cmd, "seed", double(ctx.opt.seed)));
    local.rk4_step = param(cmd, "rk4_step", ctx.rk4_step);

    auto start = std::chrono::steady_clock::now();
    try {
      command_table().at(cmd.name)(local, rec);
    } catch (const std::exception& e) {
      rec.error = e.what();
      rec.pass = false;
    }
    rec.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    report.all_pass = report.all_pass && rec.pass;
    report.records.push_back(std::move(rec));
    if (!report.records.back().pass && job.fail_fast) break;
  }
  return report;
}

std::string report_to_json(const Report& report, bool include_timing) {
  nlohmann::ordered_json j;
  j["engine_version"] = report.engine_version;
  j["gamma_representation"] = report.gamma_rep_id;
  j["metric"] = report.metric_name;
  j["all_pass"] = report.all_pass;
  j["records"] = nlohmann::ordered_json::array();
  for (const CommandRecord& rec : report.records) {
    nlohmann::ordered_json r;
    r["check"] = rec.check;
    r["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rec.params) r["params"][k] = v;
    r["verdict"] = rec.pass ? "pass" : "fail";
    r["max_residual"] = rec.max_residual;
    r["singular_points"] = nlohmann::ordered_json::array();
    for (const Point& p : rec.singular_points) r["singular_points"].push_back(p.x);
    if (!rec.error.empty()) r["error"] = rec.error;
    if (include_timing) r["millis"] = rec.millis;
    j["records"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const Report& report) {
  std::ostringstream out;
  out << "engine " << report.engine_version << ", gamma " << report.gamma_rep_id
      << ", metric " << report.metric_name << "\n";
  for (const CommandRecord& rec : report.records) {
    out << (rec.pass ? "[PASS] " : "[FAIL] ") << rec.check
        << "  max_residual=" << rec.max_residual;
    if (!rec.singular_points.empty())
      out << "  singular_points=" << rec.singular_points.size();
    if (!rec.error.empty()) out << "  error: " << rec.error;
    out << "\n";
  }
  out << "RESULT: " << (report.all_pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string list_examples_text() {
  std::ostringstream out;
  for (const CorpusEntry& e : corpus()) {
    out << e.name << "  (" << e.p << ',' << e.q << ")";
    if (!e.witnesses.empty()) {
      out << "  [";
      for (size_t i = 0; i < e.witnesses.size(); ++i)
        out << (i ? " " : "") << e.witnesses[i];
      out << "]";
    }
    out << "  " << e.description << "\n";
  }
  return out.str();
}

}  // namespace tractorlab
