#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orthotsp/instance.hpp"

namespace orthotsp {

struct ComparisonRow {
  std::string instance;
  int n = 0;
  double alpha_cost = 0.0;
  double p_cost = 0.0;
  double improvement = 0.0;  // percent; negative when P-nearness is worse
  double lambda = 0.0;       // homotopy value used for the P-nearness sets
  bool integral = false;     // costs are whole numbers
};

/// (alpha − p) / alpha · 100. Zero when both costs are zero.
double improvement_pct(double alpha_cost, double p_cost);

/// Row with the improvement computed from the two costs.
ComparisonRow make_row(std::string instance, double alpha_cost, double p_cost, bool integral = true);

struct CompareConfig {
  int m = 5;
  double budget_factor = 8.0;
  std::uint64_t seed = 1;
  // Removes the budget and keeps the best of `converge_restarts` searches,
  // seeded seed, seed+1, ...
  bool converge = false;
  int converge_restarts = 5;
};

ComparisonRow compare_nearness(const Instance& inst, const CompareConfig& cfg = {});

struct BatchReport {
  std::vector<ComparisonRow> rows;
  int win_count = 0;
  int total = 0;
  // Configuration snapshot.
  int n = 0;
  int m = 5;
  double budget_factor = 8.0;
  std::uint64_t base_seed = 1;
  bool converge = false;

  double win_rate() const { return total == 0 ? 0.0 : static_cast<double>(win_count) / total; }
  double mean_improvement() const;
};

/// Fills win_count and total from the rows.
void tally(BatchReport& r);

/// `count` uniform instances of size n seeded base_seed + i, compared in a
/// worker pool. Rows come back in seed order.
BatchReport random_batch(int count, int n, const CompareConfig& cfg, std::uint64_t base_seed);

/// "csv" or "json".
std::string export_report(const BatchReport& r, std::string_view format);
BatchReport parse_report_json(std::string_view text);

}  // namespace orthotsp
