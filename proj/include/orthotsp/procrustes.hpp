#pragma once

#include "orthotsp/candidates.hpp"
#include "orthotsp/instance.hpp"

namespace orthotsp {

/// Minimiser of tr(Dᵀ Pᵀ T P) over orthogonal P.
///
/// With D = V_D Λ_D V_Dᵀ sorted by decreasing and T = V_T Λ_T V_Tᵀ sorted by
/// increasing eigenvalue, P* = V_T V_Dᵀ and T* = P*ᵀ T P* = V_D Λ_T V_Dᵀ.
/// T* does not involve V_T, so neither the sign choice on the columns of V_T
/// nor the basis inside the repeated eigenvalues of the cycle affects it.
struct ProcrustesSolution {
  Matrix p_star;
  Matrix t_star;
  double relaxed_cost = 0.0;  // Σ λ_D↓(i) λ_T↑(i), in trace units (twice a tour length)
};

ProcrustesSolution solve_procrustes(const DistanceMatrix& d, const TourMatrix& t);

/// For each city the m cities with the largest t*_ij (ties to the smaller index).
CandidateSets p_nearness_candidates(const Matrix& t_star, int m);

/// Candidate sets ranked by T* − λ D̂, where D̂ is D rescaled to ‖T*‖_F.
CandidateSets candidates_at_lambda(const Matrix& t_star, const DistanceMatrix& d, int m,
                                   double lambda);

enum class HomotopyBranch {
  Bisection,           // last connected λ found by bisection
  Marching,            // bisection post-check failed; λ found by 0.01 steps
  NeverDisconnects,    // connected on the whole sampled range, λ = 1
  DisconnectedAtZero,  // graph already disconnected at λ = 0, λ = 1
};

std::string to_string(HomotopyBranch b);

struct HomotopyOptions {
  double lambda_max = 2.0;
  int grid_points = 20;
  double tolerance = 1e-3;
  double march_step = 0.01;
};

struct HomotopyResult {
  CandidateSets candidates;
  double lambda = 1.0;
  HomotopyBranch branch = HomotopyBranch::NeverDisconnects;
  // False when connectivity on the grid was not monotone in λ.
  bool monotone = true;
};

/// True when the symmetrised m-candidate graph at λ is connected, by the
/// Laplacian zero-eigenvalue count.
bool candidate_graph_connected(const Matrix& t_star, const DistanceMatrix& d, int m, double lambda);

HomotopyResult homotopy_candidates(const Matrix& t_star, const DistanceMatrix& d, int m,
                                   const HomotopyOptions& opts = {});

/// trace_cost(D, T, P_tour) − relaxed_cost. Also checks
/// ‖D − PᵀTP‖²_F = ‖D‖²_F − 2 tr(DᵀPᵀTP) + ‖T‖²_F at P_tour and throws
/// NumericalFailure if it is violated beyond 1e-8 relative.
double relaxation_gap(const DistanceMatrix& d, const TourMatrix& t, const Tour& tour);

/// |lhs − rhs| / max(1, |lhs|) of the identity above at an arbitrary orthogonal P.
double frobenius_identity_residual(const Matrix& d, const Matrix& t, const Matrix& p);

}  // namespace orthotsp
