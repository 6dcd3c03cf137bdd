// Command line front end. Talks to the library only through the C API.
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orthotsp/orthotsp.h"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Failure {
  int exit_code;
};

void check(orthotsp_status s) {
  if (s == ORTHOTSP_OK) return;
  std::cerr << "error: " << orthotsp_last_error() << '\n';
  throw Failure{orthotsp_status_is_input_error(s) ? kExitInput : kExitNumerical};
}

using InstancePtr = std::unique_ptr<orthotsp_instance, decltype(&orthotsp_instance_free)>;
using ReportPtr = std::unique_ptr<orthotsp_report, decltype(&orthotsp_report_free)>;

InstancePtr load(const std::string& path) {
  orthotsp_instance* raw = nullptr;
  check(orthotsp_instance_load(path.c_str(), &raw));
  return InstancePtr(raw, orthotsp_instance_free);
}

void print_owned(char* text) {
  std::cout << text;
  if (*text && text[std::char_traits<char>::length(text) - 1] != '\n') std::cout << '\n';
  orthotsp_string_free(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TSP heuristics from orthogonal relaxations"};
  app.require_subcommand(1);

  orthotsp_options opts;
  orthotsp_options_default(&opts);

  std::string file, method = "pnear", format = "csv", lambda = "auto", variant = "p";
  std::vector<std::string> files;
  int count = 0, n = 0;

  auto* solve = app.add_subcommand("solve", "Build candidate sets and run the budgeted k-opt search");
  solve->add_option("file", file, "TSPLIB file")->required();
  solve->add_option("--method", method, "alpha | pnear | flow-p | flow-h")
      ->check(CLI::IsMember({"alpha", "pnear", "flow-p", "flow-h"}));
  solve->add_option("--m", opts.m, "Candidates per city");
  solve->add_option("--budget-factor", opts.budget_factor, "Move budget in units of n");
  solve->add_option("--seed", opts.seed, "Random seed");
  solve->add_option("--restarts", opts.restarts, "Flow restarts (flow methods)");
  solve->add_flag("--converge", opts.converge, "Run to local optimality instead of a fixed budget");

  auto* cands = app.add_subcommand("candidates", "Print candidate sets");
  cands->add_option("file", file, "TSPLIB file")->required();
  cands->add_option("--method", method, "alpha | pnear | distance")
      ->required()
      ->check(CLI::IsMember({"alpha", "pnear", "distance"}));
  cands->add_option("--m", opts.m, "Candidates per city");
  cands->add_option("--lambda", lambda, "Homotopy value for pnear: auto or a number");

  auto* compare = app.add_subcommand("compare", "Compare alpha- and P-nearness on TSPLIB files");
  compare->add_option("files", files, "TSPLIB files")->required();
  compare->add_option("--m", opts.m, "Candidates per city");
  compare->add_option("--budget-factor", opts.budget_factor, "Move budget in units of n");
  compare->add_option("--seed", opts.seed, "Random seed");
  compare->add_flag("--converge", opts.converge, "Run to local optimality instead of a fixed budget");
  compare->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* batch = app.add_subcommand("random-batch", "Compare both methods on seeded uniform instances");
  batch->add_option("--count", count, "Number of instances")->required()->check(CLI::NonNegativeNumber);
  batch->add_option("--n", n, "Cities per instance")->required();
  batch->add_option("--m", opts.m, "Candidates per city");
  batch->add_option("--budget-factor", opts.budget_factor, "Move budget in units of n");
  batch->add_option("--base-seed", opts.seed, "Seed of the first instance");
  batch->add_flag("--converge", opts.converge, "Run to local optimality instead of a fixed budget");
  batch->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* flow = app.add_subcommand("flow", "Integrate a gradient flow and print the reports as JSON");
  flow->add_option("file", file, "TSPLIB file")->required();
  flow->add_option("--variant", variant, "p | h | p-constrained")
      ->required()
      ->check(CLI::IsMember({"p", "h", "p-constrained"}));
  flow->add_option("--restarts", opts.restarts, "Number of restarts");
  flow->add_option("--seed", opts.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    char* out = nullptr;
    if (*solve) {
      auto inst = load(file);
      check(orthotsp_solve(inst.get(), method.c_str(), &opts, &out));
    } else if (*cands) {
      auto inst = load(file);
      double lam = -1.0;
      if (lambda != "auto") {
        try {
          std::size_t used = 0;
          lam = std::stod(lambda, &used);
          if (used != lambda.size() || lam < 0.0) throw std::invalid_argument(lambda);
        } catch (const std::logic_error&) {
          std::cerr << "error: --lambda must be 'auto' or a nonnegative number\n";
          return kExitInput;
        }
        if (method != "pnear") {
          std::cerr << "error: --lambda only applies to --method pnear\n";
          return kExitInput;
        }
      }
      check(orthotsp_candidates(inst.get(), method.c_str(), opts.m, lam, &out));
    } else if (*compare) {
      orthotsp_report* raw = nullptr;
      check(orthotsp_report_new(&opts, &raw));
      ReportPtr report(raw, orthotsp_report_free);
      for (const auto& f : files) {
        auto inst = load(f);
        check(orthotsp_report_compare(report.get(), inst.get()));
      }
      check(orthotsp_report_export(report.get(), format.c_str(), &out));
    } else if (*batch) {
      orthotsp_report* raw = nullptr;
      check(orthotsp_random_batch(count, n, opts.seed, &opts, &raw));
      ReportPtr report(raw, orthotsp_report_free);
      check(orthotsp_report_export(report.get(), format.c_str(), &out));
    } else if (*flow) {
      auto inst = load(file);
      check(orthotsp_flow(inst.get(), variant.c_str(), &opts, &out));
    }
    if (out) print_owned(out);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return 0;
}
