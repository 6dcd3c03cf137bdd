#include <cmath>
#include <vector>

#include "orthotsp/linalg.hpp"

namespace orthotsp {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
}

void require_same(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    fail(ErrorCode::DimensionMismatch, "operands must be square of equal size");
}

void check_adjacency(const Matrix& a) {
  require_square(a, "adjacency");
  const auto n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) fail(ErrorCode::MalformedInput, "adjacency has a self loop");
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = a(i, j);
      if ((v != 0.0 && v != 1.0) || v != a(j, i))
        fail(ErrorCode::MalformedInput, "adjacency must be symmetric 0/1");
    }
  }
}

}  // namespace

SymEigen sym_eig(const Matrix& s) {
  require_square(s, "sym_eig input");
  const double norm = s.norm();
  if ((s - s.transpose()).norm() > 1e-12 * norm)
    fail(ErrorCode::AsymmetricInput, "sym_eig input is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) fail(ErrorCode::NumericalFailure, "eigensolver did not converge");

  SymEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < out.vectors.rows(); ++r) {
      double v = std::abs(out.vectors(r, c));
      if (v > best * (1.0 + 1e-12)) {
        best = v;
        arg = r;
      }
    }
    if (out.vectors(arg, c) < 0.0) out.vectors.col(c) *= -1.0;
  }
  return out;
}

Matrix ones(int n) { return Matrix::Ones(n, n); }

Matrix lie_bracket(const Matrix& a, const Matrix& b) {
  require_same(a, b);
  return a * b - b * a;
}

Matrix gen_lie_bracket(const Matrix& a, const Matrix& b) {
  require_same(a, b);
  Matrix x = a.transpose() * b;
  return x - x.transpose();
}

Matrix cayley(const Matrix& m, double h) {
  require_square(m, "generator");
  const auto n = m.rows();
  Matrix half = (0.5 * h) * m;
  Matrix lhs = Matrix::Identity(n, n) + half;
  Eigen::PartialPivLU<Matrix> lu(lhs);
  if (!(lu.rcond() > 1e-12)) fail(ErrorCode::StepTooLarge, "I + h/2 M is singular");
  Matrix q = lu.solve(Matrix::Identity(n, n) - half);
  if (!q.allFinite()) fail(ErrorCode::StepTooLarge, "Cayley factor is not finite");
  return q;
}

Matrix cayley_step(const Matrix& p, const Matrix& m, double h) {
  require_same(p, m);
  const double mn = m.norm();
  if ((m + m.transpose()).norm() > 1e-10 * mn)
    fail(ErrorCode::InvalidParameter, "Cayley generator must be skew-symmetric");
  if (mn == 0.0) return p;
  return cayley(m, h) * p;
}

double orthogonality_error(const Matrix& p) {
  return (p.transpose() * p - Matrix::Identity(p.cols(), p.cols())).norm();
}

int laplacian_components(const Matrix& adjacency) {
  check_adjacency(adjacency);
  const auto n = adjacency.rows();
  if (n == 0) return 0;
  Matrix lap = -adjacency;
  lap.diagonal() = adjacency.rowwise().sum();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::NumericalFailure, "Laplacian eigensolver failed");
  const double tol = 1e-8 * static_cast<double>(n);
  int zeros = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (solver.eigenvalues()(i) < tol) ++zeros;
  return zeros;
}

int dfs_components(const Matrix& adjacency) {
  check_adjacency(adjacency);
  const auto n = static_cast<int>(adjacency.rows());
  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (adjacency(u, v) != 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return count;
}

}  // namespace orthotsp
