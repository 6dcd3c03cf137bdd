#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "orthotsp/flows.hpp"
#include "orthotsp/harness.hpp"
#include "orthotsp/localsearch.hpp"
#include "orthotsp/orthotsp.h"
#include "orthotsp/procrustes.hpp"
#include "orthotsp/spanning.hpp"

struct orthotsp_instance {
  orthotsp::Instance inst;
  orthotsp::DistanceMatrix d;
};

struct orthotsp_report {
  orthotsp::BatchReport report;
  orthotsp::CompareConfig cfg;
};

namespace {

using namespace orthotsp;

thread_local std::string g_last_error;

orthotsp_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedInput: return ORTHOTSP_MALFORMED_INPUT;
    case ErrorCode::UnsupportedFormat: return ORTHOTSP_UNSUPPORTED_FORMAT;
    case ErrorCode::AsymmetricInput: return ORTHOTSP_ASYMMETRIC_INPUT;
    case ErrorCode::DimensionMismatch: return ORTHOTSP_DIMENSION_MISMATCH;
    case ErrorCode::TooLarge: return ORTHOTSP_TOO_LARGE;
    case ErrorCode::TooSmall: return ORTHOTSP_TOO_SMALL;
    case ErrorCode::InvalidParameter: return ORTHOTSP_INVALID_PARAMETER;
    case ErrorCode::NumericalFailure: return ORTHOTSP_NUMERICAL_FAILURE;
    case ErrorCode::NonConvergence: return ORTHOTSP_NON_CONVERGENCE;
    case ErrorCode::StepTooLarge: return ORTHOTSP_STEP_TOO_LARGE;
    case ErrorCode::Io: return ORTHOTSP_IO_ERROR;
  }
  return ORTHOTSP_INTERNAL_ERROR;
}

template <class F>
orthotsp_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return ORTHOTSP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return ORTHOTSP_INTERNAL_ERROR;
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidParameter, std::string(what) + " must not be null");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

orthotsp_instance* wrap(Instance inst) {
  DistanceMatrix d = build_distance_matrix(inst);
  return new orthotsp_instance{std::move(inst), std::move(d)};
}

CompareConfig compare_config(const orthotsp_options* o) {
  orthotsp_options def;
  orthotsp_options_default(&def);
  if (!o) o = &def;
  CompareConfig c;
  c.m = o->m;
  c.budget_factor = o->budget_factor;
  c.seed = o->seed;
  c.converge = o->converge != 0;
  return c;
}

nlohmann::json tour_json(const Tour& t) {
  nlohmann::json a = nlohmann::json::array();
  for (int c : t.order()) a.push_back(c + 1);
  return a;
}

nlohmann::json cost_json(double c, bool integral) {
  return integral ? nlohmann::json(std::llround(c)) : nlohmann::json(c);
}

}  // namespace

extern "C" {

int orthotsp_status_is_input_error(orthotsp_status s) {
  switch (s) {
    case ORTHOTSP_MALFORMED_INPUT:
    case ORTHOTSP_UNSUPPORTED_FORMAT:
    case ORTHOTSP_ASYMMETRIC_INPUT:
    case ORTHOTSP_DIMENSION_MISMATCH:
    case ORTHOTSP_TOO_LARGE:
    case ORTHOTSP_TOO_SMALL:
    case ORTHOTSP_INVALID_PARAMETER:
    case ORTHOTSP_IO_ERROR: return 1;
    default: return 0;
  }
}

const char* orthotsp_status_name(orthotsp_status s) {
  switch (s) {
    case ORTHOTSP_OK: return "Ok";
    case ORTHOTSP_MALFORMED_INPUT: return "MalformedInput";
    case ORTHOTSP_UNSUPPORTED_FORMAT: return "UnsupportedFormat";
    case ORTHOTSP_ASYMMETRIC_INPUT: return "AsymmetricInput";
    case ORTHOTSP_DIMENSION_MISMATCH: return "DimensionMismatch";
    case ORTHOTSP_TOO_LARGE: return "TooLarge";
    case ORTHOTSP_TOO_SMALL: return "TooSmall";
    case ORTHOTSP_INVALID_PARAMETER: return "InvalidParameter";
    case ORTHOTSP_NUMERICAL_FAILURE: return "NumericalFailure";
    case ORTHOTSP_NON_CONVERGENCE: return "NonConvergence";
    case ORTHOTSP_STEP_TOO_LARGE: return "StepTooLarge";
    case ORTHOTSP_IO_ERROR: return "Io";
    case ORTHOTSP_INTERNAL_ERROR: return "Internal";
  }
  return "Unknown";
}

const char* orthotsp_last_error(void) { return g_last_error.c_str(); }

void orthotsp_string_free(char* s) { std::free(s); }

orthotsp_status orthotsp_instance_load(const char* path, orthotsp_instance** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(load_tsplib(path));
  });
}

orthotsp_status orthotsp_instance_parse(const char* text, orthotsp_instance** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = wrap(parse_tsplib(text));
  });
}

orthotsp_status orthotsp_instance_random(int n, uint64_t seed, orthotsp_instance** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(random_uniform_instance(n, seed));
  });
}

void orthotsp_instance_free(orthotsp_instance* inst) { delete inst; }

int orthotsp_instance_size(const orthotsp_instance* inst) { return inst ? inst->d.size() : 0; }

const char* orthotsp_instance_name(const orthotsp_instance* inst) {
  return inst ? inst->inst.name.c_str() : "";
}

orthotsp_status orthotsp_distance(const orthotsp_instance* inst, int i, int j, double* out) {
  return guarded([&] {
    require(inst, "instance");
    require(out, "out");
    const int n = inst->d.size();
    if (i < 0 || j < 0 || i >= n || j >= n) fail(ErrorCode::InvalidParameter, "city index out of range");
    *out = inst->d(i, j);
  });
}

orthotsp_status orthotsp_tour_cost(const orthotsp_instance* inst, const int* order, int n, double* out) {
  return guarded([&] {
    require(inst, "instance");
    require(order, "order");
    require(out, "out");
    if (n < 0) fail(ErrorCode::InvalidParameter, "negative tour length");
    *out = tour_cost(inst->d, Tour(std::vector<int>(order, order + n)));
  });
}

void orthotsp_options_default(orthotsp_options* o) {
  if (!o) return;
  o->m = 5;
  o->budget_factor = 8.0;
  o->seed = 1;
  o->converge = 0;
  o->restarts = 5;
}

orthotsp_status orthotsp_solve(const orthotsp_instance* inst, const char* method, const orthotsp_options* o,
                               char** json_out) {
  return guarded([&] {
    require(inst, "instance");
    require(method, "method");
    require(json_out, "json_out");
    orthotsp_options def;
    orthotsp_options_default(&def);
    if (!o) o = &def;
    const DistanceMatrix& d = inst->d;
    const int n = d.size();
    const std::string m(method);
    if (o->m < 1 || o->m > n - 1) fail(ErrorCode::InvalidParameter, "m must lie in [1, n-1]");
    if (!(o->budget_factor >= 0.0)) fail(ErrorCode::InvalidParameter, "budget factor must be >= 0");

    nlohmann::json j;
    j["instance"] = inst->inst.name;
    j["n"] = n;
    j["method"] = m;
    j["seed"] = o->seed;
    std::optional<CandidateSets> cands;
    std::optional<Tour> start;
    if (m == "alpha") {
      cands = alpha_candidates(d, o->m);
    } else if (m == "pnear") {
      ProcrustesSolution sol = solve_procrustes(d, TourMatrix::cycle(n));
      HomotopyResult h = homotopy_candidates(sol.t_star, d, o->m);
      j["lambda"] = h.lambda;
      j["lambda_branch"] = to_string(h.branch);
      cands = std::move(h.candidates);
    } else if (m == "flow-p" || m == "flow-h") {
      FlowRunOptions fo;
      fo.variant = m == "flow-p" ? FlowVariant::P : FlowVariant::H;
      fo.restarts = o->restarts;
      fo.seed = o->seed;
      auto reports = run_flow_restarts(d, fo);
      const FlowReport& best = best_flow_report(reports, d);
      if (!best.rounded_tour) fail(ErrorCode::NonConvergence, "no flow restart produced a tour");
      start = *best.rounded_tour;
      j["flow_cost"] = cost_json(tour_cost(d, *start), d.integral());
      j["flow_restart"] = best.restart;
      cands = distance_candidates(d, o->m);
    } else {
      fail(ErrorCode::InvalidParameter, "unknown method '" + m + "'");
    }
    if (!start) start = initial_tour(d, *cands, o->seed);
    std::optional<std::int64_t> budget;
    if (!o->converge) budget = static_cast<std::int64_t>(std::llround(o->budget_factor * n));
    SearchStats s = k_opt_search(d, *start, SearchConfig{*cands, budget, 3, o->seed});
    j["initial_cost"] = cost_json(s.initial_cost, d.integral());
    j["cost"] = cost_json(s.final_cost, d.integral());
    j["attempted_moves"] = s.attempted_moves;
    j["accepted_moves"] = s.accepted_moves;
    j["tour"] = tour_json(s.final_tour);
    *json_out = copy_out(j.dump(2));
  });
}

orthotsp_status orthotsp_candidates(const orthotsp_instance* inst, const char* method, int m, double lambda,
                                    char** text_out) {
  return guarded([&] {
    require(inst, "instance");
    require(method, "method");
    require(text_out, "text_out");
    const DistanceMatrix& d = inst->d;
    const std::string how(method);
    if (how == "alpha") {
      *text_out = copy_out(candidates_to_text(alpha_candidates(d, m)));
    } else if (how == "distance") {
      *text_out = copy_out(candidates_to_text(distance_candidates(d, m)));
    } else if (how == "pnear") {
      ProcrustesSolution sol = solve_procrustes(d, TourMatrix::cycle(d.size()));
      if (lambda < 0.0)
        *text_out = copy_out(candidates_to_text(homotopy_candidates(sol.t_star, d, m).candidates));
      else
        *text_out = copy_out(candidates_to_text(candidates_at_lambda(sol.t_star, d, m, lambda)));
    } else {
      fail(ErrorCode::InvalidParameter, "unknown candidate method '" + how + "'");
    }
  });
}

orthotsp_status orthotsp_flow(const orthotsp_instance* inst, const char* variant, const orthotsp_options* o,
                              char** json_out) {
  return guarded([&] {
    require(inst, "instance");
    require(variant, "variant");
    require(json_out, "json_out");
    orthotsp_options def;
    orthotsp_options_default(&def);
    if (!o) o = &def;
    const std::string v(variant);
    FlowRunOptions fo;
    if (v == "p") fo.variant = FlowVariant::P;
    else if (v == "h") fo.variant = FlowVariant::H;
    else if (v == "p-constrained") fo.variant = FlowVariant::PConstrained;
    else fail(ErrorCode::InvalidParameter, "unknown flow variant '" + v + "'");
    fo.restarts = o->restarts;
    fo.seed = o->seed;
    auto reports = run_flow_restarts(inst->d, fo);
    const FlowReport& best = best_flow_report(reports, inst->d);
    nlohmann::json j;
    j["instance"] = inst->inst.name;
    j["n"] = inst->d.size();
    j["best_restart"] = best.restart;
    j["trivial_tour_cost"] = cost_json(tour_cost(inst->d, Tour::identity(inst->d.size())), inst->d.integral());
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : reports) runs.push_back(nlohmann::json::parse(flow_report_json(r, inst->d)));
    j["restarts"] = runs;
    *json_out = copy_out(j.dump(2));
  });
}

orthotsp_status orthotsp_report_new(const orthotsp_options* o, orthotsp_report** out) {
  return guarded([&] {
    require(out, "out");
    auto* r = new orthotsp_report{};
    r->cfg = compare_config(o);
    r->report.m = r->cfg.m;
    r->report.budget_factor = r->cfg.budget_factor;
    r->report.base_seed = r->cfg.seed;
    r->report.converge = r->cfg.converge;
    *out = r;
  });
}

void orthotsp_report_free(orthotsp_report* r) { delete r; }

orthotsp_status orthotsp_report_compare(orthotsp_report* r, const orthotsp_instance* inst) {
  return guarded([&] {
    require(r, "report");
    require(inst, "instance");
    r->report.rows.push_back(compare_nearness(inst->inst, r->cfg));
    if (r->report.rows.size() == 1) r->report.n = inst->d.size();
    else if (r->report.n != inst->d.size()) r->report.n = 0;  // mixed sizes
    tally(r->report);
  });
}

orthotsp_status orthotsp_random_batch(int count, int n, uint64_t base_seed, const orthotsp_options* o,
                                      orthotsp_report** out) {
  return guarded([&] {
    require(out, "out");
    auto* r = new orthotsp_report{};
    r->cfg = compare_config(o);
    try {
      r->report = random_batch(count, n, r->cfg, base_seed);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

int orthotsp_report_rows(const orthotsp_report* r) { return r ? r->report.total : 0; }
int orthotsp_report_wins(const orthotsp_report* r) { return r ? r->report.win_count : 0; }

orthotsp_status orthotsp_report_export(const orthotsp_report* r, const char* format, char** text_out) {
  return guarded([&] {
    require(r, "report");
    require(format, "format");
    require(text_out, "text_out");
    *text_out = copy_out(export_report(r->report, format));
  });
}

}  // extern "C"
