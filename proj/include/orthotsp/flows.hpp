#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthotsp/instance.hpp"

namespace orthotsp {

// --- Gradients on the orthogonal group ------------------------------------

/// F(P) = tr(Aᵀ Pᵀ B P)
double cost_F(const Matrix& p, const Matrix& a, const Matrix& b);
/// Euclidean partials ∂F/∂P = B P Aᵀ + Bᵀ P A.
Matrix partial_F_P(const Matrix& p, const Matrix& a, const Matrix& b);
/// P({PᵀBP, A} + {PᵀBᵀP, Aᵀ}); equals 2P[PᵀBP, A] for symmetric A and B.
Matrix grad_F_P(const Matrix& p, const Matrix& a, const Matrix& b);

/// G(P) = ⅓ tr(Pᵀ(P − P∘P)); nonnegative on O(n), zero exactly on permutations.
double penalty_G(const Matrix& p);
/// P((P∘P)ᵀP − Pᵀ(P∘P))
Matrix grad_G_P(const Matrix& p);

// --- Isospectral flow on tour matrices ------------------------------------

/// ‖H − H∘H‖²_F. Its partials are 2(H − H∘H)∘(E − 2H).
double penalty_G_H(const Matrix& h);
Matrix partial_G_H(const Matrix& h);

/// N = {H, Φ_H} + {Hᵀ, Φ_Hᵀ} with Φ_H = (1−k)A + k·partial_G_H(H).
/// The flow moves along Ḣ = [N, H].
Matrix h_flow_generator(const Matrix& h, const Matrix& a, double k);
/// −(1−k)[H, {H,A}+{Hᵀ,Aᵀ}] − k[H, {H,G_H}+{Hᵀ,G_Hᵀ}]
Matrix h_flow_rhs(const Matrix& h, const Matrix& a, double k);

/// Nearest permutation matrix in the sense of max Σ P_ij (Hungarian method).
Matrix round_to_permutation(const Matrix& p);
std::vector<int> solve_assignment_min(const Matrix& cost);

// --- Integrators ----------------------------------------------------------

struct FlowSchedule {
  // k = 0 runs first; these are the continuation values that follow it.
  std::vector<double> k_values{0.5, 0.99};
  double stage_grad_tol = 1e-4;
  double grad_tol = 1e-6;
  double max_entry = 0.999;
  int max_steps_per_stage = 4000;
  // Initial step in units of 1/‖A‖_F of the normalised cost matrix.
  double h0 = 0.1;
  double grow = 1.2;
  int grow_after = 5;
  double min_step = 1e-12;
  int trace_stride = 10;
  // Lagrangian variant only.
  double penalty_tol = 1e-6;
  int max_steps_constrained = 40000;
};

struct CostSample {
  int step = 0;
  double cost = 0.0;
};

enum class FlowVariant { P, H, PConstrained };

struct FlowReport {
  FlowVariant variant = FlowVariant::P;
  Matrix final_state;  // P for the P-flows, H for the H-flow
  double k = 0.0;
  double lambda = 0.0;  // Lagrange multiplier (constrained variant)
  bool converged = false;
  std::optional<Tour> rounded_tour;
  std::vector<CostSample> cost_trace;  // tr(Dᵀ PᵀTP) or tr(Dᵀ H)
  int steps = 0;
  double gradient_norm = 0.0;
  double penalty = 0.0;
  int restart = 0;
};

/// Superimposed cost/penalty flow integrated with Cayley steps. D is scaled to
/// unit Frobenius norm internally so the homotopy in k is unit free.
FlowReport integrate_p_flow(const DistanceMatrix& d, const TourMatrix& t, const Matrix& p0,
                            const FlowSchedule& schedule = {});

/// Gradient descent in P, gradient ascent in the multiplier λ. Unless P₀ is
/// already a permutation, the cost is relaxed alone first and the result is
/// seated as in the P-flow. λ weighs G against the normalised cost.
FlowReport integrate_p_flow_constrained(const DistanceMatrix& d, const TourMatrix& t,
                                        const Matrix& p0, double lambda0,
                                        const FlowSchedule& schedule = {});

/// Structure preserving H_{k+1} = R_kᵀ H_k R_k. Starts at H0 (defaults to T).
FlowReport integrate_h_flow(const DistanceMatrix& d, const TourMatrix& t,
                            const FlowSchedule& schedule = {},
                            const std::optional<Matrix>& h0 = std::nullopt);

/// Thresholds H at 0.5 and validates the single-cycle structure.
std::optional<Tour> extract_tour(const Matrix& h);

/// Haar-distributed orthogonal matrix from a seeded generator.
Matrix random_orthogonal(int n, std::uint64_t seed);

struct FlowRunOptions {
  FlowVariant variant = FlowVariant::P;
  int restarts = 5;
  std::uint64_t seed = 1;
  double lambda0 = 1e4;
  FlowSchedule schedule;
};

/// Restart 0 starts from the identity (the trivial tour), the others from
/// random orthogonal matrices. Restarts run concurrently. Returns every
/// report; `best_flow_report` picks the cheapest converged one.
std::vector<FlowReport> run_flow_restarts(const DistanceMatrix& d, const FlowRunOptions& opts);
const FlowReport& best_flow_report(const std::vector<FlowReport>& reports, const DistanceMatrix& d);

std::string to_string(FlowVariant v);
std::string flow_report_json(const FlowReport& r, const DistanceMatrix& d);

}  // namespace orthotsp
