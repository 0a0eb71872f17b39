#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tractorlab/jobs.hpp"

using namespace tractorlab;

int main(int argc, char** argv) {
  CLI::App app{"tractorlab: batch driver for conformal tractor calculus checks"};
  app.require_subcommand(1);

  JobSpec job;
  std::vector<std::string> commands;
  std::string output, format = "json";

  CLI::App* run_cmd = app.add_subcommand("run", "Run checks on a metric definition");
  run_cmd->add_option("--metric", job.path, "metric definition file");
  run_cmd->add_option("--example", job.example, "shipped example name (see list-examples)");
  run_cmd->add_option("--command", commands,
                      "check to run (repeatable): curvature, metricity, holonomy_sample, "
                      "ricci_isotropic, certify_parallel_spinor, twistor_check, "
                      "theorem1_pipeline, theorem2_pipeline");
  run_cmd->add_option("--seed", job.seed, "RNG seed for sampled checks")->capture_default_str();
  run_cmd->add_option("--samples", job.samples, "sample points per check")
      ->capture_default_str();
  run_cmd->add_option("--tol", job.tolerance, "residual tolerance")->capture_default_str();
  run_cmd->add_option("--rk4-step", job.rk4_step, "transport integrator step")
      ->capture_default_str();
  run_cmd->add_flag("--fail-fast", job.fail_fast, "stop at the first failing command");
  run_cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  run_cmd->add_option("--output", output, "write the report to a file instead of stdout");

  CLI::App* list_cmd = app.add_subcommand("list-examples", "Print the shipped example corpus");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    std::cout << list_examples_text();
    return 0;
  }

  if (commands.empty())
    commands = {"curvature", "metricity", "holonomy_sample"};
  for (const std::string& c : commands) job.commands.push_back(CommandSpec{c, {}});

  try {
    Report report = run(job);
    std::string doc = format == "text" ? report_to_text(report) : report_to_json(report);
    if (output.empty()) {
      std::cout << doc;
    } else {
      std::ofstream out(output);
      if (!out) {
        std::cerr << "error: cannot write '" << output << "'\n";
        return 2;
      }
      out << doc;
    }
    return report.all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    // run() throws only before any command executes: validation failure.
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  }
}
