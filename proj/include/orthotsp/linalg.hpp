#pragma once

#include "orthotsp/instance.hpp"

namespace orthotsp {

/// Eigen-decomposition S = V diag(eigenvalues) Vᵀ of a symmetric matrix.
///
/// Eigenvalues are ascending and column i of `vectors` belongs to eigenvalue i.
/// Each eigenvector is normalised so that its entry of largest magnitude is
/// positive (first such entry on ties). Bases inside repeated eigenvalues are
/// whatever the solver returns, which is deterministic for identical input.
struct SymEigen {
  Vector values;
  Matrix vectors;
};

SymEigen sym_eig(const Matrix& s);

Matrix ones(int n);

/// [A, B] = AB − BA
Matrix lie_bracket(const Matrix& a, const Matrix& b);
/// {A, B} = AᵀB − BᵀA, always skew-symmetric.
Matrix gen_lie_bracket(const Matrix& a, const Matrix& b);

/// Cayley factor (I + h/2 M)⁻¹ (I − h/2 M). Orthogonal for skew M.
/// Throws StepTooLarge when I + h/2 M is numerically singular.
Matrix cayley(const Matrix& m, double h);

/// Q P with Q = cayley(M, h). M must be skew-symmetric.
Matrix cayley_step(const Matrix& p, const Matrix& m, double h);

/// ‖PᵀP − I‖_F
double orthogonality_error(const Matrix& p);

/// Connected components counted as the multiplicity of the zero eigenvalue of
/// the graph Laplacian (eigenvalues below 1e-8·n).
int laplacian_components(const Matrix& adjacency);

/// The same count by depth-first search.
int dfs_components(const Matrix& adjacency);

}  // namespace orthotsp
