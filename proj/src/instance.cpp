#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "orthotsp/instance.hpp"

namespace orthotsp {
namespace {

void check_symmetric_zero_diag(const Matrix& m, std::string_view what) {
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m(i, i) != 0.0)
      fail(ErrorCode::MalformedInput, std::string(what) + ": nonzero diagonal at " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (m(i, j) != m(j, i))
        fail(ErrorCode::AsymmetricInput,
             std::string(what) + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") differs from its transpose");
  }
}

}  // namespace

void Instance::validate() const {
  if (n < 3) fail(ErrorCode::MalformedInput, "instance needs n >= 3, got " + std::to_string(n));
  if (coords.has_value() == explicit_matrix.has_value())
    fail(ErrorCode::MalformedInput, "exactly one of coords / explicit matrix must be present");
  if (coords) {
    if (static_cast<int>(coords->size()) != n)
      fail(ErrorCode::MalformedInput, "coordinate count does not match n");
    for (const auto& p : *coords)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        fail(ErrorCode::MalformedInput, "non-finite coordinate");
  } else {
    const Matrix& m = *explicit_matrix;
    if (m.rows() != n || m.cols() != n)
      fail(ErrorCode::MalformedInput, "explicit matrix is not n x n");
    if (!m.allFinite() || (m.array() < 0.0).any())
      fail(ErrorCode::MalformedInput, "explicit matrix must be finite and nonnegative");
    check_symmetric_zero_diag(m, "explicit matrix");
  }
}

DistanceMatrix::DistanceMatrix(Matrix entries, bool integral)
    : entries_(std::move(entries)), integral_(integral) {
  if (entries_.rows() != entries_.cols())
    fail(ErrorCode::DimensionMismatch, "distance matrix must be square");
  if (!entries_.allFinite()) fail(ErrorCode::MalformedInput, "distance matrix has non-finite entries");
  if ((entries_.array() < 0.0).any()) fail(ErrorCode::MalformedInput, "negative distance");
  check_symmetric_zero_diag(entries_, "distance matrix");
}

double nint_distance(Point2 a, Point2 b) {
  return std::floor(std::hypot(a.x - b.x, a.y - b.y) + 0.5);
}

DistanceMatrix build_distance_matrix(const Instance& inst) {
  inst.validate();
  const int n = inst.n;
  if (inst.explicit_matrix) {
    const Matrix& m = *inst.explicit_matrix;
    bool integral = (m.array() == m.array().round()).all();
    return DistanceMatrix(m, integral);
  }
  const auto& pts = *inst.coords;
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = 0.0;
      switch (inst.weight_type) {
        case EdgeWeightType::Euc2D: v = nint_distance(pts[i], pts[j]); break;
        case EdgeWeightType::Ceil2D:
          v = std::ceil(std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
          break;
        case EdgeWeightType::Euclidean:
          v = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
          break;
        case EdgeWeightType::Explicit:
          fail(ErrorCode::MalformedInput, "explicit weight type without a matrix");
      }
      d(i, j) = d(j, i) = v;
    }
  }
  return DistanceMatrix(std::move(d), inst.weight_type != EdgeWeightType::Euclidean);
}

Tour::Tour(std::vector<int> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  std::vector<char> seen(n, 0);
  for (int c : order_) {
    if (c < 0 || c >= n || seen[c]) fail(ErrorCode::MalformedInput, "tour is not a permutation");
    seen[c] = 1;
  }
}

Tour Tour::identity(int n) {
  std::vector<int> o(n);
  std::iota(o.begin(), o.end(), 0);
  return Tour(std::move(o));
}

Tour Tour::canonical() const {
  const int n = size();
  if (n == 0) return *this;
  std::vector<int> o(order_);
  auto zero = std::find(o.begin(), o.end(), 0);
  std::rotate(o.begin(), zero, o.end());
  if (n > 2 && o[n - 1] < o[1]) std::reverse(o.begin() + 1, o.end());
  Tour t(std::move(o));
  t.cached_cost_ = cached_cost_;
  return t;
}

TourMatrix TourMatrix::cycle(int n) { return from_tour(Tour::identity(n)); }

TourMatrix TourMatrix::directed_cycle(int n) {
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = 1.0;
  return TourMatrix(std::move(m), true);
}

TourMatrix TourMatrix::from_tour(const Tour& t) {
  const int n = t.size();
  if (n < 3) fail(ErrorCode::TooSmall, "tour matrix needs n >= 3");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int a = t[i];
    int b = t[(i + 1) % n];
    m(a, b) = m(b, a) = 1.0;
  }
  return TourMatrix(std::move(m), false);
}

TourMatrix TourMatrix::from_adjacency(const Matrix& adj) {
  const auto n = static_cast<int>(adj.rows());
  if (adj.cols() != n || n < 3) fail(ErrorCode::MalformedInput, "adjacency must be square, n >= 3");
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j) {
      double v = adj(i, j);
      if (v != 0.0 && v != 1.0) fail(ErrorCode::MalformedInput, "adjacency entries must be 0/1");
      if (v != adj(j, i)) fail(ErrorCode::MalformedInput, "adjacency not symmetric");
      deg += static_cast<int>(v);
    }
    if (adj(i, i) != 0.0) fail(ErrorCode::MalformedInput, "adjacency has self loop");
    if (deg != 2) fail(ErrorCode::MalformedInput, "vertex " + std::to_string(i) + " has degree " + std::to_string(deg));
  }
  TourMatrix tm(adj, false);
  (void)tm.to_tour();  // throws unless a single cycle
  return tm;
}

Tour TourMatrix::to_tour() const {
  const int n = size();
  if (directed_) {
    std::vector<int> o;
    o.reserve(n);
    int cur = 0;
    for (int k = 0; k < n; ++k) {
      o.push_back(cur);
      int next = -1;
      for (int j = 0; j < n; ++j)
        if (entries_(cur, j) == 1.0) next = j;
      if (next < 0) fail(ErrorCode::MalformedInput, "directed cycle broken");
      cur = next;
    }
    if (cur != 0) fail(ErrorCode::MalformedInput, "not a single directed cycle");
    return Tour(std::move(o));
  }
  std::vector<int> o;
  o.reserve(n);
  std::vector<char> visited(n, 0);
  int prev = -1;
  int cur = 0;
  for (int k = 0; k < n; ++k) {
    if (visited[cur]) fail(ErrorCode::MalformedInput, "tour matrix is not a single cycle");
    visited[cur] = 1;
    o.push_back(cur);
    // First neighbour found is the smaller index, which fixes the orientation.
    int next = -1;
    for (int j = 0; j < n && next < 0; ++j)
      if (entries_(cur, j) == 1.0 && j != prev) next = j;
    prev = cur;
    cur = next;
    if (cur < 0) fail(ErrorCode::MalformedInput, "tour matrix is not a single cycle");
  }
  if (cur != 0) fail(ErrorCode::MalformedInput, "tour matrix is not a single cycle");
  return Tour(std::move(o));
}

double tour_cost(const DistanceMatrix& d, const Tour& t) {
  const int n = t.size();
  if (n != d.size())
    fail(ErrorCode::DimensionMismatch,
         "tour has " + std::to_string(n) + " cities, matrix " + std::to_string(d.size()));
  double c = 0.0;
  for (int i = 0; i + 1 < n; ++i) c += d(t[i], t[i + 1]);
  if (n > 0) c += d(t[n - 1], t[0]);
  return c;
}

double trace_cost(const Matrix& a, const Matrix& b, const Matrix& p) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || p.rows() != n || p.cols() != n)
    fail(ErrorCode::DimensionMismatch, "trace_cost expects equal square matrices");
  // tr(Aᵀ X) is the entrywise inner product of A and X.
  return (a.array() * (p.transpose() * b * p).array()).sum();
}

double trace_cost(const DistanceMatrix& d, const TourMatrix& t, const Matrix& p) {
  return trace_cost(d.matrix(), t.matrix(), p);
}

Matrix permutation_matrix(const Tour& t) {
  const int n = t.size();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, t[i]) = 1.0;
  return p;
}

bool is_permutation_matrix(const Matrix& p, double tol) {
  const auto n = p.rows();
  if (p.cols() != n) return false;
  for (Eigen::Index i = 0; i < n; ++i) {
    int ones_row = 0;
    int ones_col = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double r = p(i, j);
      double c = p(j, i);
      if (std::abs(r - 1.0) <= tol) ++ones_row;
      else if (std::abs(r) > tol) return false;
      if (std::abs(c - 1.0) <= tol) ++ones_col;
      else if (std::abs(c) > tol) return false;
    }
    if (ones_row != 1 || ones_col != 1) return false;
  }
  return true;
}

Tour tour_from_permutation(const Matrix& p) {
  if (!is_permutation_matrix(p, 1e-9)) fail(ErrorCode::MalformedInput, "not a permutation matrix");
  const auto n = static_cast<int>(p.rows());
  std::vector<int> o(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Index j = 0;
    p.row(i).maxCoeff(&j);
    o[i] = static_cast<int>(j);
  }
  return Tour(std::move(o));
}

Tour brute_force_optimum(const DistanceMatrix& d) {
  const int n = d.size();
  if (n > 12) fail(ErrorCode::TooLarge, "brute force limited to n <= 12");
  if (n < 3) fail(ErrorCode::TooSmall, "need n >= 3");
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<int> best;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    if (rest.front() > rest.back()) continue;  // each cycle once per direction
    double c = d(0, rest.front()) + d(rest.back(), 0);
    for (int i = 0; i + 1 < n - 1; ++i) c += d(rest[i], rest[i + 1]);
    if (c < best_cost) {
      best_cost = c;
      best = rest;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::vector<int> o{0};
  o.insert(o.end(), best.begin(), best.end());
  Tour t(std::move(o));
  t.set_cached_cost(best_cost);
  return t;
}

}  // namespace orthotsp
