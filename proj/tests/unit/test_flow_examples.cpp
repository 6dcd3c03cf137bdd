// Ten-city scenarios: the flow should turn the trivial tour into a tour that
// is no longer than it. Instances are seeds 1..5 of the uniform generator.
#include <doctest.h>

#include "orthotsp/flows.hpp"

using namespace orthotsp;

TEST_SUITE("flow_examples") {
  TEST_CASE("P-flow from the trivial tour, n = 10") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      DistanceMatrix d = build_distance_matrix(random_uniform_instance(10, seed));
      FlowReport r = integrate_p_flow(d, TourMatrix::cycle(10), Matrix::Identity(10, 10));
      REQUIRE(r.converged);
      CHECK(tour_cost(d, *r.rounded_tour) <= tour_cost(d, Tour::identity(10)));
    }
  }

  TEST_CASE("H-flow from the trivial tour, n = 10") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      DistanceMatrix d = build_distance_matrix(random_uniform_instance(10, seed));
      FlowReport r = integrate_h_flow(d, TourMatrix::cycle(10));
      CHECK(r.converged);
      if (!r.rounded_tour) continue;
      const double cost = tour_cost(d, *r.rounded_tour);
      CHECK(cost >= tour_cost(d, brute_force_optimum(d)) - 1e-9);
      CHECK(cost <= tour_cost(d, Tour::identity(10)));
    }
  }
}
