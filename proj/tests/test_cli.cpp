#include "doctest.h"

#include <cstdlib>
#include <set>

#include "json.hpp"
#include "tractorlab/jobs.hpp"

using namespace tractorlab;

namespace {

const char* kDirect =
    "# flat split metric\n"
    "chart x1 x2 x3 x4 ;\n"
    "signature 2 2 ;\n"
    "bounds x1 -2 2 ;\n"
    "g 1 1 = -1 ;\n"
    "g 2 2 = -1 ;\n"
    "g 3 3 = 1 ;\n"
    "g 4 4 = 1 ;\n"
    "g 1 3 = 0 ;\n";

JobSpec inline_job(const std::string& source, std::vector<std::string> cmds) {
  JobSpec job;
  job.source = source;
  for (const std::string& c : cmds) job.commands.push_back(CommandSpec{c, {}});
  return job;
}

}  // namespace

TEST_CASE("metric file parsing: direct metrics, bounds, symmetry fill") {
  MetricDocument doc = parse_metric_file(kDirect);
  REQUIRE(doc.chart);
  CHECK(doc.chart->dim() == 4);
  CHECK(doc.p == 2);
  CHECK(doc.q == 2);
  CHECK(doc.chart->has_bounds(0));
  CHECK(doc.chart->bounds(0) == std::pair<double, double>(-2, 2));
  CHECK(doc.g[0][0].evaluate(Point{{0, 0, 0, 0}}) == -1.0);
  CHECK(doc.g[0][1].is_zero());  // unset entries are zero

  RealizedMetric rm = realize(doc);
  CHECK(rm.g->p() == 2);
  CHECK(rm.g->q() == 2);
  CHECK_FALSE(rm.L.has_value());

  // symmetric auto-fill
  MetricDocument sym = parse_metric_file(
      "chart u v ;\nsignature 1 1 ;\ng 1 2 = u ;\n");
  CHECK(sym.g[1][0].str() == sym.g[0][1].str());
}

TEST_CASE("metric file parsing: malformed input reports the line number") {
  try {
    parse_metric_file("chart x y ;\nsignature 1 1\ng 1 1 = 1 ;\n");
    FAIL("expected MetricFileError");
  } catch (const MetricFileError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_metric_file("g 1 1 = 1 ;\n"), MetricFileError);  // no chart
  CHECK_THROWS_AS(parse_metric_file("chart x x ;\n"), MetricFileError);
  CHECK_THROWS_AS(parse_metric_file("chart x y ;\nfrobnicate 1 ;\n"), MetricFileError);
  CHECK_THROWS_AS(parse_metric_file("chart x y ;\ng 1 3 = 1 ;\n"), MetricFileError);
  CHECK_THROWS_AS(parse_metric_file("chart x y ;\ng 1 2 = )( ;\n"), MetricFileError);
  CHECK_THROWS_AS(
      parse_metric_file("chart x y ;\nsignature 1 1 ;\ng 1 2 = x ;\ng 2 1 = y ;\n"),
      MetricFileError);  // conflicting symmetric entries

  // declared signature contradicting the metric is a validation error
  MetricDocument doc =
      parse_metric_file("chart x y ;\nsignature 2 0 ;\ng 1 1 = 1 ;\ng 2 2 = 1 ;\n");
  CHECK_THROWS_AS(realize(doc), MetricFileError);
}

TEST_CASE("walker and pure_walker stanzas realize through the generators") {
  MetricDocument wd = parse_metric_file(
      "chart x1 x2 x3 ;\nwalker 1 ;\nA 1 1 = 1 ;\nB 1 1 = x2^2 * x3 ;\n");
  RealizedMetric wm = realize(wd);
  CHECK(wm.g->component(0, 2).is_one());
  REQUIRE(wm.L.has_value());
  CHECK(wm.L->rank() == 1);

  MetricDocument pd = parse_metric_file(
      "chart x1 y1 z ;\npure_walker 1 ;\ng 1 1 = y1 ;\n");
  RealizedMetric pm = realize(pd);
  REQUIRE(pm.pure.has_value());
  CHECK(pm.pure->certification.pass);
  CHECK(pm.g->p() == 2);
  CHECK(pm.g->q() == 1);

  // spec round trip through the writers
  WalkerSpec ws{3, 1, wd.chart, wd.A, wd.H, wd.B, {}};
  MetricDocument wd2 = parse_metric_file(to_metric_file(ws));
  CHECK(wd2.walker_r == wd.walker_r);
  CHECK(simplify(wd2.B[0][0] - wd.B[0][0]).is_zero());

  PureWalkerSpec ps{1, false, pd.chart, pd.g, {}};
  MetricDocument pd2 = parse_metric_file(to_metric_file(ps));
  CHECK(pd2.pure_m == pd.pure_m);
  CHECK(simplify(pd2.g[0][0] - pd.g[0][0]).is_zero());
}

TEST_CASE("spinor stanza builds a spinor field in the engine frame") {
  std::string src = std::string(kDirect) + "spinor 1, 0, 0, 0 ;\n";
  RealizedMetric rm = realize(parse_metric_file(src));
  REQUIRE(rm.spinor.has_value());
  CHECK(int(rm.spinor->comp.size()) == rm.rep->N);

  CHECK_THROWS_AS(realize(parse_metric_file(std::string(kDirect) + "spinor 1, 0 ;\n")),
                  MetricFileError);
}

TEST_CASE("corpus covers the required signatures and ranks, and round-trips") {
  std::set<std::pair<int, int>> sigs;
  std::set<int> walker_ranks;
  for (const CorpusEntry& e : corpus()) {
    CAPTURE(e.name);
    MetricDocument doc = parse_metric_file(e.definition);
    RealizedMetric rm = realize(doc);
    CHECK(rm.g->p() == e.p);
    CHECK(rm.g->q() == e.q);
    sigs.insert({e.p, e.q});
    if (doc.walker_r) walker_ranks.insert(*doc.walker_r);
    if (doc.pure_m) walker_ranks.insert(*doc.pure_m);
  }
  CHECK(sigs.count({2, 2}));
  CHECK(sigs.count({3, 2}));
  CHECK(sigs.count({3, 3}));
  for (int r : {1, 2, 3}) CHECK(walker_ranks.count(r));
  CHECK_THROWS_AS(corpus_entry("no_such_example"), std::invalid_argument);
}

TEST_CASE("run: flat metric yields zero curvature and identity holonomy") {
  JobSpec job;
  job.example = "flat_22";
  job.commands = {{"curvature", {}}, {"holonomy_sample", {}}};
  Report rep = run(job);
  CHECK(rep.all_pass);
  REQUIRE(rep.records.size() == 2);
  CHECK(rep.records[0].max_residual == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.records[1].pass);
  CHECK(rep.records[1].max_residual < 1e-9);
  CHECK(rep.engine_version == "0.1.0");
  CHECK(rep.gamma_rep_id.find("clifford(2,2)") == 0);
}

TEST_CASE("run: pure_walker pipelines pass and reports are deterministic") {
  JobSpec job;
  job.example = "pure_m2_22";
  job.commands = {{"certify_parallel_spinor", {}},
                  {"theorem1_pipeline", {}},
                  {"theorem2_pipeline", {}}};
  Report a = run(job);
  CHECK(a.all_pass);
  for (const CommandRecord& rec : a.records) {
    CAPTURE(rec.check);
    CHECK(rec.pass);
  }
  Report b = run(job);
  CHECK(report_to_json(a, false) == report_to_json(b, false));

  nlohmann::json doc = nlohmann::json::parse(report_to_json(a));
  CHECK(doc["all_pass"] == true);
  CHECK(doc["records"].size() == 3);
  CHECK(doc["records"][0]["check"] == "certify_parallel_spinor");
  CHECK(doc["records"][0]["verdict"] == "pass");
  CHECK(doc["records"][0]["params"]["seed"] == 42.0);
}

TEST_CASE("run: validation errors precede execution; fail-fast stops the batch") {
  JobSpec nosrc;
  nosrc.commands = {{"curvature", {}}};
  CHECK_THROWS_AS(run(nosrc), JobError);

  JobSpec two;
  two.example = "flat_22";
  two.source = kDirect;
  two.commands = {{"curvature", {}}};
  CHECK_THROWS_AS(run(two), JobError);

  JobSpec unknown;
  unknown.example = "flat_22";
  unknown.commands = {{"no_such_check", {}}};
  CHECK_THROWS_AS(run(unknown), JobError);

  JobSpec missing;
  missing.example = "no_such_example";
  missing.commands = {{"curvature", {}}};
  CHECK_THROWS_AS(run(missing), std::invalid_argument);

  JobSpec ff = inline_job(kDirect, {"twistor_check", "curvature"});
  ff.fail_fast = true;
  Report rep = run(ff);  // no spinor: first command fails
  CHECK_FALSE(rep.all_pass);
  REQUIRE(rep.records.size() == 1);
  CHECK_FALSE(rep.records[0].pass);
  CHECK_FALSE(rep.records[0].error.empty());

  ff.fail_fast = false;
  Report rep2 = run(ff);
  CHECK(rep2.records.size() == 2);
  CHECK(rep2.records[1].pass);
}

TEST_CASE("run: twistor check on an inline constant spinor over flat space") {
  std::string src = std::string(kDirect) + "spinor 1, 0, 0, 0 ;\n";
  Report rep = run(inline_job(src, {"twistor_check", "metricity"}));
  CHECK(rep.all_pass);
  CHECK(rep.records[0].max_residual < 1e-9);
}

TEST_CASE("thread cap honors TRACTORLAB_THREADS") {
  setenv("TRACTORLAB_THREADS", "2", 1);
  CHECK(thread_cap() == 2);
  setenv("TRACTORLAB_THREADS", "0", 1);  // ignored: must stay >= 1
  CHECK(thread_cap() >= 1);
  unsetenv("TRACTORLAB_THREADS");
  CHECK(thread_cap() >= 1);
}

TEST_CASE("text report renders verdict lines") {
  JobSpec job;
  job.example = "walker_r1_ppwave";
  job.commands = {{"ricci_isotropic", {}}, {"metricity", {}}};
  Report rep = run(job);
  CHECK(rep.all_pass);
  std::string text = report_to_text(rep);
  CHECK(text.find("[PASS] ricci_isotropic") != std::string::npos);
  CHECK(text.find("RESULT: PASS") != std::string::npos);
  CHECK(list_examples_text().find("pure_m3_33") != std::string::npos);
}
