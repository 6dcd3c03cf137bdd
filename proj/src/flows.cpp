#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include <json.hpp>

#include "orthotsp/flows.hpp"
#include "orthotsp/linalg.hpp"

namespace orthotsp {
namespace {

Matrix hadamard_square(const Matrix& p) { return p.cwiseProduct(p); }

Matrix normalised(const Matrix& d) {
  const double s = d.norm();
  return s > 0.0 ? Matrix(d / s) : d;
}

// Smallest over rows of the largest entry in that row.
double min_row_max(const Matrix& p) { return p.rowwise().maxCoeff().minCoeff(); }

Matrix reorthonormalise(const Matrix& p) {
  Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// F(RP) = F(P) for every orthogonal R with RᵀBR = B. Cayley steps keep det P,
// so the penalty stage can only reach permutations of that sign. Among
// ±P and ±HP, H = I − (2/n)J, pick one whose nearest permutation has the
// same determinant, then the largest Σp³.
Matrix seat_for_continuation(const Matrix& p, const Matrix& b) {
  const auto n = p.rows();
  std::vector<Matrix> seats{p, -p};
  Matrix h = Matrix::Identity(n, n) - (2.0 / static_cast<double>(n)) * Matrix::Ones(n, n);
  if ((h * b * h - b).norm() <= 1e-12 * std::max(1.0, b.norm())) {
    seats.push_back(h * p);
    seats.push_back(-(h * p));
  }
  const Matrix* best = nullptr;
  bool best_parity = false;
  double best_cubes = 0.0;
  for (const Matrix& s : seats) {
    const bool parity = (s.determinant() > 0.0) == (round_to_permutation(s).determinant() > 0.0);
    const double cubes = s.array().cube().sum();
    if (!best || (parity && !best_parity) || (parity == best_parity && cubes > best_cubes)) {
      best = &s;
      best_parity = parity;
      best_cubes = cubes;
    }
  }
  return *best;
}

void check_flow_inputs(const DistanceMatrix& d, const TourMatrix& t, const Matrix& x) {
  const auto n = d.size();
  if (t.size() != n || x.rows() != n || x.cols() != n)
    fail(ErrorCode::DimensionMismatch, "flow inputs must share the instance size");
}

// Combined objective (1−k)F + cG on the orthogonal group. For the P-flow the
// penalty weight is k; the Lagrangian variant passes λ and a unit cost weight.
struct PObjective {
  const Matrix& a;
  const Matrix& b;
  double cost_weight;
  double penalty_weight;

  double value(const Matrix& p) const {
    return cost_weight * cost_F(p, a, b) + penalty_weight * penalty_G(p);
  }
  // Skew generator M = Φ_P Pᵀ − P Φ_Pᵀ; the Riemannian gradient is M P.
  Matrix generator(const Matrix& p) const {
    Matrix partial = cost_weight * partial_F_P(p, a, b) - penalty_weight * hadamard_square(p);
    Matrix m = partial * p.transpose();
    return m - m.transpose();
  }
};

struct StepControl {
  double h;
  int accepted_in_row = 0;
};

// One accepted Cayley descent step on P, or false on step-size underflow.
bool descend_p(const PObjective& obj, Matrix& p, const Matrix& m, double phi, StepControl& ctl,
               const FlowSchedule& s) {
  while (ctl.h >= s.min_step) {
    Matrix cand;
    try {
      cand = cayley(m, ctl.h) * p;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepTooLarge) throw;
      ctl.h *= 0.5;
      ctl.accepted_in_row = 0;
      continue;
    }
    if (obj.value(cand) <= phi) {
      p = std::move(cand);
      if (++ctl.accepted_in_row >= s.grow_after) {
        ctl.h *= s.grow;
        ctl.accepted_in_row = 0;
      }
      return true;
    }
    ctl.h *= 0.5;
    ctl.accepted_in_row = 0;
  }
  return false;
}

struct HObjective {
  const Matrix& a;
  double k;
  double value(const Matrix& h) const {
    return (1.0 - k) * (a.array() * h.array()).sum() + k * penalty_G_H(h);
  }
};

}  // namespace

double cost_F(const Matrix& p, const Matrix& a, const Matrix& b) { return trace_cost(a, b, p); }

Matrix partial_F_P(const Matrix& p, const Matrix& a, const Matrix& b) {
  return b * p * a.transpose() + b.transpose() * p * a;
}

Matrix grad_F_P(const Matrix& p, const Matrix& a, const Matrix& b) {
  if (p.rows() != a.rows() || a.rows() != b.rows() || p.cols() != a.cols())
    fail(ErrorCode::DimensionMismatch, "grad_F_P operands differ in size");
  Matrix h = p.transpose() * b * p;
  return p * (gen_lie_bracket(h, a) + gen_lie_bracket(h.transpose(), a.transpose()));
}

double penalty_G(const Matrix& p) {
  return (p.array() * (p - hadamard_square(p)).array()).sum() / 3.0;
}

Matrix grad_G_P(const Matrix& p) {
  Matrix sq = hadamard_square(p);
  return p * (sq.transpose() * p - p.transpose() * sq);
}

double penalty_G_H(const Matrix& h) { return (h - hadamard_square(h)).squaredNorm(); }

Matrix partial_G_H(const Matrix& h) {
  Matrix resid = h - hadamard_square(h);
  Matrix factor = Matrix::Ones(h.rows(), h.cols()) - 2.0 * h;
  return 2.0 * resid.cwiseProduct(factor);
}

Matrix h_flow_generator(const Matrix& h, const Matrix& a, double k) {
  if (h.rows() != a.rows() || h.cols() != a.cols())
    fail(ErrorCode::DimensionMismatch, "H and A differ in size");
  Matrix fh = (1.0 - k) * a;
  if (k != 0.0) fh += k * partial_G_H(h);
  return gen_lie_bracket(h, fh) + gen_lie_bracket(h.transpose(), fh.transpose());
}

Matrix h_flow_rhs(const Matrix& h, const Matrix& a, double k) {
  return -lie_bracket(h, h_flow_generator(h, a, k));
}

std::optional<Tour> extract_tour(const Matrix& h) {
  Matrix adj = (h.array() > 0.5).cast<double>();
  try {
    return TourMatrix::from_adjacency(adj).to_tour();
  } catch (const Error&) {
    return std::nullopt;
  }
}

FlowReport integrate_p_flow(const DistanceMatrix& d, const TourMatrix& t, const Matrix& p0,
                            const FlowSchedule& s) {
  check_flow_inputs(d, t, p0);
  const Matrix a = normalised(d.matrix());
  const Matrix& b = t.matrix();
  const double ortho_limit = 1e-6 * d.size();

  FlowReport rep;
  rep.variant = FlowVariant::P;
  Matrix p = p0;
  StepControl ctl{s.h0};
  int step = 0;
  double gnorm = std::numeric_limits<double>::infinity();

  std::vector<double> ks{0.0};
  ks.insert(ks.end(), s.k_values.begin(), s.k_values.end());
  for (std::size_t stage = 0; stage < ks.size(); ++stage) {
    const double k = ks[stage];
    const bool last = stage + 1 == ks.size();
    const double tol = last ? s.grad_tol : s.stage_grad_tol;
    PObjective obj{a, b, 1.0 - k, k};
    ctl.h = std::max(ctl.h, s.h0);
    for (int it = 0; it < s.max_steps_per_stage; ++it) {
      Matrix m = obj.generator(p);
      gnorm = (m * p).norm();
      if (gnorm <= tol) break;
      if (step % s.trace_stride == 0) rep.cost_trace.push_back({step, cost_F(p, d.matrix(), b)});
      if (!descend_p(obj, p, m, obj.value(p), ctl, s)) break;
      ++step;
      if (orthogonality_error(p) > ortho_limit) p = reorthonormalise(p);
    }
    rep.k = k;
    if (!last) p = seat_for_continuation(p, b);
  }
  PObjective final_obj{a, b, 1.0 - rep.k, rep.k};
  gnorm = (final_obj.generator(p) * p).norm();
  rep.cost_trace.push_back({step, cost_F(p, d.matrix(), b)});
  rep.steps = step;
  rep.gradient_norm = gnorm;
  rep.penalty = penalty_G(p);
  rep.converged = gnorm <= s.grad_tol && min_row_max(p) >= s.max_entry;
  if (rep.converged) rep.rounded_tour = tour_from_permutation(round_to_permutation(p));
  rep.final_state = std::move(p);
  return rep;
}

FlowReport integrate_p_flow_constrained(const DistanceMatrix& d, const TourMatrix& t,
                                        const Matrix& p0, double lambda0, const FlowSchedule& s) {
  check_flow_inputs(d, t, p0);
  const Matrix a = normalised(d.matrix());
  const Matrix& b = t.matrix();
  const double ortho_limit = 1e-6 * d.size();

  FlowReport rep;
  rep.variant = FlowVariant::PConstrained;
  rep.k = 1.0;
  Matrix p = p0;
  double lambda = lambda0;
  StepControl ctl{s.h0};
  int step = 0;
  auto settled = [&] { return penalty_G(p) <= s.penalty_tol && min_row_max(p) >= s.max_entry; };
  if (!settled()) {
    // Relax the cost alone first, as the k = 0 stage of the P-flow does.
    PObjective cost_only{a, b, 1.0, 0.0};
    for (int it = 0; it < s.max_steps_per_stage; ++it) {
      Matrix m = cost_only.generator(p);
      if ((m * p).norm() <= s.stage_grad_tol) break;
      if (step % s.trace_stride == 0) rep.cost_trace.push_back({step, cost_F(p, d.matrix(), b)});
      if (!descend_p(cost_only, p, m, cost_only.value(p), ctl, s)) break;
      ++step;
      if (orthogonality_error(p) > ortho_limit) p = reorthonormalise(p);
    }
    p = seat_for_continuation(p, b);
    ctl.h = std::max(ctl.h, s.h0);
  }
  for (; step < s.max_steps_constrained; ++step) {
    const double g = penalty_G(p);
    if (settled()) {
      rep.converged = true;
      break;
    }
    if (step % s.trace_stride == 0) rep.cost_trace.push_back({step, cost_F(p, d.matrix(), b)});
    PObjective obj{a, b, 1.0, lambda};
    Matrix m = obj.generator(p);
    if (!descend_p(obj, p, m, obj.value(p), ctl, s)) break;
    // Explicit ascent on the multiplier with the accepted step.
    lambda += ctl.h * g;
    if (orthogonality_error(p) > ortho_limit) p = reorthonormalise(p);
  }
  PObjective obj{a, b, 1.0, lambda};
  rep.cost_trace.push_back({step, cost_F(p, d.matrix(), b)});
  rep.steps = step;
  rep.lambda = lambda;
  rep.gradient_norm = (obj.generator(p) * p).norm();
  rep.penalty = penalty_G(p);
  if (rep.converged) rep.rounded_tour = tour_from_permutation(round_to_permutation(p));
  rep.final_state = std::move(p);
  return rep;
}

FlowReport integrate_h_flow(const DistanceMatrix& d, const TourMatrix& t, const FlowSchedule& s,
                            const std::optional<Matrix>& h0) {
  Matrix h = h0 ? *h0 : t.matrix();
  check_flow_inputs(d, t, h);
  if (t.directed()) fail(ErrorCode::InvalidParameter, "H-flow expects the undirected tour matrix");
  const Matrix a = normalised(d.matrix());

  FlowReport rep;
  rep.variant = FlowVariant::H;
  StepControl ctl{s.h0};
  int step = 0;
  double gnorm = std::numeric_limits<double>::infinity();

  std::vector<double> ks{0.0};
  ks.insert(ks.end(), s.k_values.begin(), s.k_values.end());
  for (std::size_t stage = 0; stage < ks.size(); ++stage) {
    const double k = ks[stage];
    const bool last = stage + 1 == ks.size();
    const double tol = last ? s.grad_tol : s.stage_grad_tol;
    HObjective obj{a, k};
    ctl.h = std::max(ctl.h, s.h0);
    for (int it = 0; it < s.max_steps_per_stage; ++it) {
      Matrix n = h_flow_generator(h, a, k);
      gnorm = lie_bracket(h, n).norm();
      if (gnorm <= tol) break;
      if (step % s.trace_stride == 0)
        rep.cost_trace.push_back({step, (d.matrix().array() * h.array()).sum()});
      const double phi = obj.value(h);
      bool moved = false;
      while (ctl.h >= s.min_step) {
        Matrix r;
        try {
          r = cayley(n, ctl.h);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::StepTooLarge) throw;
          ctl.h *= 0.5;
          continue;
        }
        Matrix cand = r.transpose() * h * r;
        cand = 0.5 * (cand + cand.transpose()).eval();
        if (obj.value(cand) <= phi) {
          h = std::move(cand);
          moved = true;
          if (++ctl.accepted_in_row >= s.grow_after) {
            ctl.h *= s.grow;
            ctl.accepted_in_row = 0;
          }
          break;
        }
        ctl.h *= 0.5;
        ctl.accepted_in_row = 0;
      }
      if (!moved) break;
      ++step;
    }
    rep.k = k;
  }
  gnorm = lie_bracket(h, h_flow_generator(h, a, rep.k)).norm();
  rep.cost_trace.push_back({step, (d.matrix().array() * h.array()).sum()});
  rep.steps = step;
  rep.gradient_norm = gnorm;
  rep.penalty = penalty_G_H(h);
  rep.rounded_tour = extract_tour(h);
  rep.converged = rep.rounded_tour.has_value();
  rep.final_state = std::move(h);
  return rep;
}

Matrix random_orthogonal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

std::vector<FlowReport> run_flow_restarts(const DistanceMatrix& d, const FlowRunOptions& o) {
  if (o.restarts < 1) fail(ErrorCode::InvalidParameter, "restarts must be >= 1");
  const int n = d.size();
  const TourMatrix t = TourMatrix::cycle(n);
  auto run_one = [&](int r) {
    Matrix p0 = r == 0 ? Matrix(Matrix::Identity(n, n))
                       : random_orthogonal(n, o.seed * 1000003ULL + static_cast<std::uint64_t>(r));
    FlowReport rep;
    switch (o.variant) {
      case FlowVariant::P: rep = integrate_p_flow(d, t, p0, o.schedule); break;
      case FlowVariant::PConstrained:
        rep = integrate_p_flow_constrained(d, t, p0, o.lambda0, o.schedule);
        break;
      case FlowVariant::H: {
        Matrix h0 = p0.transpose() * t.matrix() * p0;
        rep = integrate_h_flow(d, t, o.schedule, h0);
        break;
      }
    }
    rep.restart = r;
    return rep;
  };
  std::vector<std::future<FlowReport>> jobs;
  for (int r = 0; r < o.restarts; ++r) jobs.push_back(std::async(std::launch::async, run_one, r));
  std::vector<FlowReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

const FlowReport& best_flow_report(const std::vector<FlowReport>& reports, const DistanceMatrix& d) {
  if (reports.empty()) fail(ErrorCode::InvalidParameter, "no flow reports");
  const FlowReport* best = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (!r.rounded_tour) continue;
    double c = tour_cost(d, *r.rounded_tour);
    if (c < best_cost) {
      best_cost = c;
      best = &r;
    }
  }
  if (best) return *best;
  for (const auto& r : reports) {
    double c = r.cost_trace.empty() ? std::numeric_limits<double>::infinity() : r.cost_trace.back().cost;
    if (!best || c < best_cost) {
      best_cost = c;
      best = &r;
    }
  }
  return *best;
}

std::string to_string(FlowVariant v) {
  switch (v) {
    case FlowVariant::P: return "p";
    case FlowVariant::H: return "h";
    case FlowVariant::PConstrained: return "p-constrained";
  }
  return "?";
}

std::string flow_report_json(const FlowReport& r, const DistanceMatrix& d) {
  using nlohmann::json;
  json j;
  j["variant"] = to_string(r.variant);
  j["restart"] = r.restart;
  j["converged"] = r.converged;
  j["steps"] = r.steps;
  j["k"] = r.k;
  if (r.variant == FlowVariant::PConstrained) j["lambda"] = r.lambda;
  j["gradient_norm"] = r.gradient_norm;
  j["penalty"] = r.penalty;
  if (r.rounded_tour) {
    json tour = json::array();
    for (int c : r.rounded_tour->order()) tour.push_back(c + 1);
    j["tour"] = tour;
    j["tour_cost"] = tour_cost(d, *r.rounded_tour);
  } else {
    j["tour"] = nullptr;
    j["tour_cost"] = nullptr;
  }
  json trace = json::array();
  for (const auto& s : r.cost_trace) trace.push_back({s.step, s.cost});
  j["cost_trace"] = trace;
  json state = json::array();
  for (Eigen::Index i = 0; i < r.final_state.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < r.final_state.cols(); ++c) row.push_back(r.final_state(i, c));
    state.push_back(row);
  }
  j["final_state"] = state;
  return j.dump(2);
}

}  // namespace orthotsp
