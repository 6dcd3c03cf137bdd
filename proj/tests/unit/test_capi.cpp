// Exercises the shared library through its C header only.
#include <doctest.h>

#include <string>

#include "orthotsp/orthotsp.h"

namespace {
std::string data(const char* name) { return std::string(ORTHOTSP_TEST_DATA) + "/" + name; }

std::string take(char* s) {
  std::string out(s);
  orthotsp_string_free(s);
  return out;
}
}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("instances and costs") {
    orthotsp_instance* inst = nullptr;
    REQUIRE(orthotsp_instance_load(data("tiny3.tsp").c_str(), &inst) == ORTHOTSP_OK);
    CHECK(orthotsp_instance_size(inst) == 3);
    CHECK(std::string(orthotsp_instance_name(inst)) == "tiny3");
    double d = 0;
    CHECK(orthotsp_distance(inst, 1, 2, &d) == ORTHOTSP_OK);
    CHECK(d == 5.0);
    int order[3] = {0, 2, 1};
    CHECK(orthotsp_tour_cost(inst, order, 3, &d) == ORTHOTSP_OK);
    CHECK(d == 12.0);
    int bad[3] = {0, 0, 1};
    CHECK(orthotsp_tour_cost(inst, bad, 3, &d) == ORTHOTSP_MALFORMED_INPUT);
    CHECK(orthotsp_distance(inst, 3, 0, &d) == ORTHOTSP_INVALID_PARAMETER);
    orthotsp_instance_free(inst);
  }

  TEST_CASE("error statuses") {
    orthotsp_instance* inst = nullptr;
    CHECK(orthotsp_instance_load(data("bad_dimension.tsp").c_str(), &inst) == ORTHOTSP_MALFORMED_INPUT);
    CHECK(std::string(orthotsp_last_error()).find("MalformedInput") != std::string::npos);
    CHECK(orthotsp_instance_load(data("geo.tsp").c_str(), &inst) == ORTHOTSP_UNSUPPORTED_FORMAT);
    CHECK(orthotsp_instance_load(data("asym4.tsp").c_str(), &inst) == ORTHOTSP_ASYMMETRIC_INPUT);
    CHECK(orthotsp_instance_load("/nonexistent.tsp", &inst) == ORTHOTSP_IO_ERROR);
    CHECK(orthotsp_instance_load(nullptr, &inst) == ORTHOTSP_INVALID_PARAMETER);
    CHECK(orthotsp_status_is_input_error(ORTHOTSP_MALFORMED_INPUT));
    CHECK_FALSE(orthotsp_status_is_input_error(ORTHOTSP_NON_CONVERGENCE));
    CHECK(std::string(orthotsp_status_name(ORTHOTSP_STEP_TOO_LARGE)) == "StepTooLarge");
  }

  TEST_CASE("solve, candidates, flow and reports") {
    orthotsp_instance* inst = nullptr;
    REQUIRE(orthotsp_instance_random(25, 3, &inst) == ORTHOTSP_OK);
    orthotsp_options o;
    orthotsp_options_default(&o);
    CHECK(o.m == 5);
    CHECK(o.budget_factor == 8.0);
    char* out = nullptr;
    for (const char* m : {"alpha", "pnear", "flow-p"}) {
      REQUIRE(orthotsp_solve(inst, m, &o, &out) == ORTHOTSP_OK);
      CHECK(take(out).find("\"cost\"") != std::string::npos);
    }
    CHECK(orthotsp_solve(inst, "magic", &o, &out) == ORTHOTSP_INVALID_PARAMETER);
    REQUIRE(orthotsp_candidates(inst, "pnear", 4, 0.5, &out) == ORTHOTSP_OK);
    CHECK(take(out).find("# lambda: 0.5") != std::string::npos);
    REQUIRE(orthotsp_candidates(inst, "distance", 4, -1, &out) == ORTHOTSP_OK);
    CHECK(take(out).find("25: ") != std::string::npos);
    CHECK(orthotsp_candidates(inst, "alpha", 40, -1, &out) == ORTHOTSP_INVALID_PARAMETER);
    o.restarts = 2;
    REQUIRE(orthotsp_flow(inst, "h", &o, &out) == ORTHOTSP_OK);
    CHECK(take(out).find("\"restarts\"") != std::string::npos);

    orthotsp_report* rep = nullptr;
    REQUIRE(orthotsp_report_new(&o, &rep) == ORTHOTSP_OK);
    REQUIRE(orthotsp_report_compare(rep, inst) == ORTHOTSP_OK);
    CHECK(orthotsp_report_rows(rep) == 1);
    REQUIRE(orthotsp_report_export(rep, "csv", &out) == ORTHOTSP_OK);
    CHECK(take(out).rfind("instance,alpha_cost,p_cost,improvement_pct\nrand25-s3,", 0) == 0);
    CHECK(orthotsp_report_export(rep, "yaml", &out) == ORTHOTSP_INVALID_PARAMETER);
    orthotsp_report_free(rep);

    REQUIRE(orthotsp_random_batch(2, 20, 5, &o, &rep) == ORTHOTSP_OK);
    CHECK(orthotsp_report_rows(rep) == 2);
    CHECK(orthotsp_report_wins(rep) <= 2);
    orthotsp_report_free(rep);
    orthotsp_instance_free(inst);
  }
}
