#include <cmath>

#include "orthotsp/linalg.hpp"
#include "orthotsp/procrustes.hpp"

namespace orthotsp {

ProcrustesSolution solve_procrustes(const DistanceMatrix& d, const TourMatrix& t) {
  const int n = d.size();
  if (t.size() != n) fail(ErrorCode::DimensionMismatch, "D and T differ in size");
  if (t.directed()) fail(ErrorCode::InvalidParameter, "Procrustes expects the undirected tour matrix");
  SymEigen ed = sym_eig(d.matrix());
  SymEigen et = sym_eig(t.matrix());
  Matrix vd = ed.vectors.rowwise().reverse();
  Vector ld = ed.values.reverse();

  ProcrustesSolution s;
  s.p_star = et.vectors * vd.transpose();
  s.t_star = vd * et.values.asDiagonal() * vd.transpose();
  s.t_star = 0.5 * (s.t_star + s.t_star.transpose()).eval();
  s.relaxed_cost = ld.dot(et.values);
  return s;
}

CandidateSets p_nearness_candidates(const Matrix& t_star, int m) {
  return CandidateSets(CandidateSource::PNearness, rank_by_score(t_star, m), 0.0);
}

namespace {

Matrix scaled_distance(const Matrix& t_star, const DistanceMatrix& d) {
  const double dn = d.matrix().norm();
  if (dn == 0.0) return Matrix::Zero(d.size(), d.size());
  return d.matrix() * (t_star.norm() / dn);
}

}  // namespace

CandidateSets candidates_at_lambda(const Matrix& t_star, const DistanceMatrix& d, int m, double lambda) {
  if (t_star.rows() != d.size() || t_star.cols() != d.size())
    fail(ErrorCode::DimensionMismatch, "T* and D differ in size");
  if (!std::isfinite(lambda)) fail(ErrorCode::InvalidParameter, "lambda must be finite");
  Matrix h = t_star - lambda * scaled_distance(t_star, d);
  return CandidateSets(CandidateSource::PNearness, rank_by_score(h, m), lambda);
}

bool candidate_graph_connected(const Matrix& t_star, const DistanceMatrix& d, int m, double lambda) {
  return laplacian_components(candidates_at_lambda(t_star, d, m, lambda).adjacency()) == 1;
}

std::string to_string(HomotopyBranch b) {
  switch (b) {
    case HomotopyBranch::Bisection: return "bisection";
    case HomotopyBranch::Marching: return "marching";
    case HomotopyBranch::NeverDisconnects: return "never-disconnects";
    case HomotopyBranch::DisconnectedAtZero: return "disconnected-at-zero";
  }
  return "?";
}

HomotopyResult homotopy_candidates(const Matrix& t_star, const DistanceMatrix& d, int m,
                                   const HomotopyOptions& o) {
  if (o.grid_points < 2 || !(o.lambda_max > 0.0) || !(o.tolerance > 0.0) || !(o.march_step > 0.0))
    fail(ErrorCode::InvalidParameter, "bad homotopy options");
  auto connected = [&](double lambda) { return candidate_graph_connected(t_star, d, m, lambda); };
  auto finish = [&](double lambda, HomotopyBranch branch, bool monotone) {
    return HomotopyResult{candidates_at_lambda(t_star, d, m, lambda), lambda, branch, monotone};
  };

  std::vector<double> grid(o.grid_points);
  std::vector<char> conn(o.grid_points);
  for (int i = 0; i < o.grid_points; ++i) {
    grid[i] = o.lambda_max * i / (o.grid_points - 1);
    conn[i] = connected(grid[i]);
  }
  bool monotone = true;
  for (int i = 1; i < o.grid_points; ++i)
    if (conn[i] && !conn[i - 1]) monotone = false;

  if (!conn[0]) return finish(1.0, HomotopyBranch::DisconnectedAtZero, monotone);
  int first_off = -1;
  for (int i = 1; i < o.grid_points; ++i)
    if (!conn[i]) {
      first_off = i;
      break;
    }
  if (first_off < 0) return finish(1.0, HomotopyBranch::NeverDisconnects, monotone);

  // Last connected point left of the first disconnected grid value.
  double lo = grid[first_off - 1], hi = grid[first_off];
  while (hi - lo > o.tolerance) {
    double mid = 0.5 * (lo + hi);
    (connected(mid) ? lo : hi) = mid;
  }
  if (monotone && !connected(lo + o.march_step)) return finish(lo, HomotopyBranch::Bisection, monotone);

  // March from the last point known to be connected until the next step
  // disconnects. Starting at the origin when the grid was not monotone.
  double lambda = monotone ? lo : 0.0;
  while (lambda <= o.lambda_max) {
    if (!connected(lambda + o.march_step)) return finish(lambda, HomotopyBranch::Marching, monotone);
    lambda += o.march_step;
  }
  return finish(1.0, HomotopyBranch::NeverDisconnects, monotone);
}

double frobenius_identity_residual(const Matrix& d, const Matrix& t, const Matrix& p) {
  Matrix h = p.transpose() * t * p;
  const double lhs = (d - h).squaredNorm();
  const double rhs = d.squaredNorm() - 2.0 * (d.array() * h.array()).sum() + t.squaredNorm();
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double relaxation_gap(const DistanceMatrix& d, const TourMatrix& t, const Tour& tour) {
  if (tour.size() != d.size() || t.size() != d.size())
    fail(ErrorCode::DimensionMismatch, "tour, D and T differ in size");
  Matrix p = permutation_matrix(tour);
  if (frobenius_identity_residual(d.matrix(), t.matrix(), p) > 1e-8)
    fail(ErrorCode::NumericalFailure, "norm/trace identity violated");
  return trace_cost(d, t, p) - solve_procrustes(d, t).relaxed_cost;
}

}  // namespace orthotsp
