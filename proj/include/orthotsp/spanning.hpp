#pragma once

#include <utility>
#include <vector>

#include "orthotsp/candidates.hpp"
#include "orthotsp/instance.hpp"

namespace orthotsp {

// Minimum spanning tree on V∖{v1} plus the two cheapest edges at v1.
struct OneTree {
  std::vector<std::pair<int, int>> edges;  // (min, max) city pairs
  double weight = 0.0;
  std::vector<int> degrees;
  int special_vertex = 0;
};

/// Edge ties are resolved by the lexicographically smaller (min, max) pair;
/// the two edges at v1 by smaller weight, then smaller index. `w` is any
/// symmetric weight matrix (D or a π-transformed copy of it).
OneTree minimum_1tree(const Matrix& w, int v1 = 0);
OneTree minimum_1tree(const DistanceMatrix& d, int v1 = 0);

/// α(i, j): weight increase of the minimum 1-tree when forced to contain
/// (i, j). Zero on the diagonal and on every edge of the minimum 1-tree.
Matrix alpha_values(const Matrix& w, int v1 = 0);
Matrix alpha_values(const DistanceMatrix& d, int v1 = 0);

struct PiVector {
  Vector values;
  double lower_bound = 0.0;  // in distance units
  int iterations = 0;
};

/// d_ij + π_i + π_j off the diagonal, zero on it.
Matrix pi_transformed(const Matrix& d, const Vector& pi);

struct SubgradientOptions {
  int max_iters = -1;  // -1: 50 + n
  int v1 = 0;
  int patience = 10;   // non-improving iterations before the step is halved
  double min_step_ratio = 1e-6;
};

/// Held–Karp ascent π ← π + t (deg − 2). Returns the π with the largest bound
/// w(min 1-tree under D̃(π)) − 2Σπ seen along the way.
PiVector subgradient_optimize(const DistanceMatrix& d, const SubgradientOptions& opts = {});

/// m lowest α values on D̃(π*) per city; ties by distance, then index. Scores
/// are −α so that lists are ranked by decreasing score.
CandidateSets alpha_candidates(const DistanceMatrix& d, int m, const SubgradientOptions& opts = {});

}  // namespace orthotsp
