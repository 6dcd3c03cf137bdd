#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "orthotsp/harness.hpp"
#include "orthotsp/localsearch.hpp"
#include "orthotsp/procrustes.hpp"
#include "orthotsp/spanning.hpp"

namespace orthotsp {

double improvement_pct(double alpha_cost, double p_cost) {
  if (alpha_cost == 0.0) {
    if (p_cost == 0.0) return 0.0;
    fail(ErrorCode::InvalidParameter, "improvement undefined for a zero alpha cost");
  }
  return (alpha_cost - p_cost) / alpha_cost * 100.0;
}

ComparisonRow make_row(std::string instance, double alpha_cost, double p_cost, bool integral) {
  ComparisonRow r;
  r.instance = std::move(instance);
  r.alpha_cost = alpha_cost;
  r.p_cost = p_cost;
  r.improvement = improvement_pct(alpha_cost, p_cost);
  r.integral = integral;
  return r;
}

namespace {

double budgeted_cost(const DistanceMatrix& d, const CandidateSets& c, const CompareConfig& cfg) {
  const int n = d.size();
  if (!cfg.converge) {
    SearchConfig sc{c, static_cast<std::int64_t>(std::llround(cfg.budget_factor * n)), 3, cfg.seed};
    return k_opt_search(d, initial_tour(d, c, cfg.seed), sc).final_cost;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, cfg.converge_restarts); ++r) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
    SearchConfig sc{c, std::nullopt, 3, seed};
    best = std::min(best, k_opt_search(d, initial_tour(d, c, seed), sc).final_cost);
  }
  return best;
}

}  // namespace

ComparisonRow compare_nearness(const Instance& inst, const CompareConfig& cfg) {
  if (cfg.m < 1) fail(ErrorCode::InvalidParameter, "m must be positive");
  if (!(cfg.budget_factor >= 0.0)) fail(ErrorCode::InvalidParameter, "budget factor must be >= 0");
  const DistanceMatrix d = build_distance_matrix(inst);
  const int n = d.size();
  if (cfg.m > n - 1) fail(ErrorCode::InvalidParameter, "m must not exceed n - 1");

  CandidateSets alpha = alpha_candidates(d, cfg.m);
  ProcrustesSolution sol = solve_procrustes(d, TourMatrix::cycle(n));
  HomotopyResult hom = homotopy_candidates(sol.t_star, d, cfg.m);

  ComparisonRow row = make_row(inst.name, budgeted_cost(d, alpha, cfg), budgeted_cost(d, hom.candidates, cfg),
                               d.integral());
  row.n = n;
  row.lambda = hom.lambda;
  return row;
}

double BatchReport::mean_improvement() const {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.improvement;
  return s / static_cast<double>(rows.size());
}

void tally(BatchReport& r) {
  r.total = static_cast<int>(r.rows.size());
  r.win_count = static_cast<int>(
      std::count_if(r.rows.begin(), r.rows.end(), [](const ComparisonRow& x) { return x.p_cost < x.alpha_cost; }));
}

BatchReport random_batch(int count, int n, const CompareConfig& cfg, std::uint64_t base_seed) {
  if (count < 0) fail(ErrorCode::InvalidParameter, "count must be >= 0");
  if (count > 0 && n < 3) fail(ErrorCode::TooSmall, "instances need at least 3 cities");
  BatchReport rep;
  rep.n = n;
  rep.m = cfg.m;
  rep.budget_factor = cfg.budget_factor;
  rep.base_seed = base_seed;
  rep.converge = cfg.converge;
  rep.rows.resize(count);

  const int workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> pool;
  for (int w = 0; w < std::min(workers, std::max(count, 1)); ++w)
    pool.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < count; i += workers)
        rep.rows[i] = compare_nearness(random_uniform_instance(n, base_seed + static_cast<std::uint64_t>(i)), cfg);
    }));
  for (auto& f : pool) f.get();
  tally(rep);
  return rep;
}

namespace {

std::string cost_text(double c, bool integral) {
  std::ostringstream os;
  if (integral) os << std::llround(c);
  else os << std::setprecision(std::numeric_limits<double>::max_digits10) << c;
  return os.str();
}

}  // namespace

std::string export_report(const BatchReport& r, std::string_view format) {
  if (format == "csv") {
    std::ostringstream os;
    os << "instance,alpha_cost,p_cost,improvement_pct\n";
    for (const auto& row : r.rows)
      os << row.instance << ',' << cost_text(row.alpha_cost, row.integral) << ','
         << cost_text(row.p_cost, row.integral) << ',' << std::fixed << std::setprecision(2) << row.improvement
         << std::defaultfloat << '\n';
    return os.str();
  }
  if (format == "json") {
    using nlohmann::json;
    json rows = json::array();
    for (const auto& row : r.rows) {
      auto num = [&](double c) { return row.integral ? json(std::llround(c)) : json(c); };
      rows.push_back({{"instance", row.instance},
                      {"n", row.n},
                      {"alpha_cost", num(row.alpha_cost)},
                      {"p_cost", num(row.p_cost)},
                      {"improvement_pct", row.improvement},
                      {"lambda", row.lambda},
                      {"integral", row.integral}});
    }
    json j{{"rows", rows},
           {"win_count", r.win_count},
           {"total", r.total},
           {"config",
            {{"n", r.n}, {"m", r.m}, {"budget_factor", r.budget_factor}, {"base_seed", r.base_seed},
             {"converge", r.converge}}}};
    return j.dump(2);
  }
  fail(ErrorCode::InvalidParameter, "unknown report format '" + std::string(format) + "'");
}

BatchReport parse_report_json(std::string_view text) {
  using nlohmann::json;
  BatchReport r;
  try {
    json j = json::parse(text);
    for (const auto& row : j.at("rows")) {
      ComparisonRow c;
      c.instance = row.at("instance").get<std::string>();
      c.n = row.value("n", 0);
      c.alpha_cost = row.at("alpha_cost").get<double>();
      c.p_cost = row.at("p_cost").get<double>();
      c.improvement = row.at("improvement_pct").get<double>();
      c.lambda = row.value("lambda", 0.0);
      c.integral = row.value("integral", false);
      r.rows.push_back(std::move(c));
    }
    r.win_count = j.at("win_count").get<int>();
    r.total = j.at("total").get<int>();
    const auto& cfg = j.at("config");
    r.n = cfg.at("n").get<int>();
    r.m = cfg.at("m").get<int>();
    r.budget_factor = cfg.at("budget_factor").get<double>();
    r.base_seed = cfg.at("base_seed").get<std::uint64_t>();
    r.converge = cfg.at("converge").get<bool>();
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedInput, std::string("bad report JSON: ") + e.what());
  }
  return r;
}

}  // namespace orthotsp
