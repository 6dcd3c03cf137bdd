#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthotsp/candidates.hpp"
#include "orthotsp/instance.hpp"

namespace orthotsp {

struct SearchConfig {
  CandidateSets candidates;
  // Number of step invocations allowed; nullopt runs to local optimality.
  std::optional<std::int64_t> move_budget;
  int max_k = 3;
  // Shuffles the order in which cities are first examined.
  std::uint64_t rng_seed = 1;

  // Budget 8n.
  static SearchConfig standard(CandidateSets candidates, std::uint64_t seed = 1);
};

struct MoveSample {
  std::int64_t move = 0;  // index of the attempted move that was accepted
  double cost = 0.0;
};

struct SearchStats {
  std::int64_t attempted_moves = 0;
  std::int64_t accepted_moves = 0;
  std::vector<MoveSample> cost_by_move;
  Tour final_tour{std::vector<int>{0, 1, 2}};
  double initial_cost = 0.0;
  double final_cost = 0.0;
};

/// Greedy walk from a seeded random city through the best-ranked unvisited
/// candidate, falling back to the nearest unvisited city.
Tour initial_tour(const DistanceMatrix& d, const CandidateSets& c, std::uint64_t seed);

/// First strictly improving 2-opt move whose two new edges are both candidate
/// edges (either endpoint listing the other). Anchors are scanned in city order.
std::optional<Tour> two_opt_step(const DistanceMatrix& d, const Tour& t, const CandidateSets& c);

/// Best strictly improving pure 3-opt reconnection whose three new edges are
/// all candidate edges.
std::optional<Tour> three_opt_step(const DistanceMatrix& d, const Tour& t, const CandidateSets& c);

/// 2-opt to local optimality, then one 3-opt step, repeated until the budget
/// is spent or neither step improves. Every step invocation is an attempted move.
SearchStats k_opt_search(const DistanceMatrix& d, const Tour& t0, const SearchConfig& cfg);

/// Complete candidate lists (every other city, nearest first).
CandidateSets complete_candidates(const DistanceMatrix& d);

std::string search_stats_json(const SearchStats& s, bool integral_costs);
std::string search_stats_csv(const SearchStats& s, bool integral_costs);

}  // namespace orthotsp
