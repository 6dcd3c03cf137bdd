#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "orthotsp/spanning.hpp"

namespace orthotsp {
namespace {

struct Rooted {
  OneTree tree;
  std::vector<std::vector<int>> adj;  // tree adjacency on V∖{v1}
  int second_at_v1 = -1;               // the dearer of the two v1 edges
};

void check_weights(const Matrix& w, int v1) {
  const auto n = w.rows();
  if (w.cols() != n) fail(ErrorCode::DimensionMismatch, "weight matrix must be square");
  if (n < 3) fail(ErrorCode::TooSmall, "a 1-tree needs at least 3 cities");
  if (v1 < 0 || v1 >= n) fail(ErrorCode::InvalidParameter, "special vertex out of range");
}

// Strict total order on edges: weight, then (min, max) lexicographically.
bool edge_less(double wa, int a1, int a2, double wb, int b1, int b2) {
  return std::make_tuple(wa, std::min(a1, a2), std::max(a1, a2)) <
         std::make_tuple(wb, std::min(b1, b2), std::max(b1, b2));
}

Rooted build(const Matrix& w, int v1) {
  check_weights(w, v1);
  const int n = static_cast<int>(w.rows());
  Rooted r;
  OneTree& t = r.tree;
  t.special_vertex = v1;
  t.degrees.assign(n, 0);
  r.adj.assign(n, {});
  auto add = [&](int a, int b) {
    t.edges.emplace_back(std::min(a, b), std::max(a, b));
    t.weight += w(a, b);
    ++t.degrees[a];
    ++t.degrees[b];
  };

  // Prim on V∖{v1}, O(n²).
  const int root = v1 == 0 ? 1 : 0;
  std::vector<char> in(n, 0);
  std::vector<int> link(n, -1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  in[v1] = 1;
  in[root] = 1;
  for (int j = 0; j < n; ++j)
    if (!in[j]) {
      best[j] = w(root, j);
      link[j] = root;
    }
  for (int added = 1; added < n - 1; ++added) {
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (in[j]) continue;
      if (pick < 0 || edge_less(best[j], link[j], j, best[pick], link[pick], pick)) pick = j;
    }
    in[pick] = 1;
    add(link[pick], pick);
    r.adj[link[pick]].push_back(pick);
    r.adj[pick].push_back(link[pick]);
    for (int j = 0; j < n; ++j)
      if (!in[j] && edge_less(w(pick, j), pick, j, best[j], link[j], j)) {
        best[j] = w(pick, j);
        link[j] = pick;
      }
  }

  std::vector<int> others;
  for (int j = 0; j < n; ++j)
    if (j != v1) others.push_back(j);
  std::partial_sort(others.begin(), others.begin() + 2, others.end(), [&](int a, int b) {
    return std::make_pair(w(v1, a), a) < std::make_pair(w(v1, b), b);
  });
  add(v1, others[0]);
  add(v1, others[1]);
  r.second_at_v1 = others[1];
  return r;
}

}  // namespace

OneTree minimum_1tree(const Matrix& w, int v1) { return build(w, v1).tree; }
OneTree minimum_1tree(const DistanceMatrix& d, int v1) { return minimum_1tree(d.matrix(), v1); }

Matrix alpha_values(const Matrix& w, int v1) {
  Rooted r = build(w, v1);
  const int n = static_cast<int>(w.rows());
  Matrix alpha = Matrix::Zero(n, n);

  // β(s, j) = largest edge weight on the tree path s → j, one DFS per source.
  std::vector<double> beta(n);
  std::vector<int> stack, parent(n);
  for (int s = 0; s < n; ++s) {
    if (s == v1) continue;
    std::fill(parent.begin(), parent.end(), -2);
    parent[s] = -1;
    beta[s] = -std::numeric_limits<double>::infinity();
    stack.assign(1, s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : r.adj[u]) {
        if (parent[v] != -2) continue;
        parent[v] = u;
        beta[v] = std::max(beta[u], w(u, v));
        stack.push_back(v);
      }
    }
    for (int j = 0; j < n; ++j)
      if (j != s && j != v1) alpha(s, j) = std::max(0.0, w(s, j) - beta[j]);
  }

  const double second = w(v1, r.second_at_v1);
  for (int j = 0; j < n; ++j) {
    if (j == v1) continue;
    bool chosen = false;
    for (auto [a, b] : r.tree.edges)
      if ((a == v1 && b == j) || (b == v1 && a == j)) chosen = true;
    alpha(v1, j) = alpha(j, v1) = chosen ? 0.0 : std::max(0.0, w(v1, j) - second);
  }
  return alpha;
}

Matrix alpha_values(const DistanceMatrix& d, int v1) { return alpha_values(d.matrix(), v1); }

Matrix pi_transformed(const Matrix& d, const Vector& pi) {
  const auto n = d.rows();
  if (pi.size() != n) fail(ErrorCode::DimensionMismatch, "π has the wrong length");
  Matrix out = d;
  out.colwise() += pi;
  out.rowwise() += pi.transpose();
  out.diagonal().setZero();
  return out;
}

PiVector subgradient_optimize(const DistanceMatrix& d, const SubgradientOptions& o) {
  const int n = d.size();
  const int max_iters = o.max_iters < 0 ? 50 + n : o.max_iters;
  Vector pi = Vector::Zero(n);

  // w(tree under D̃) − 2Σπ, accumulated in original units as Σ d + Σ π (deg − 2).
  auto bound_of = [&](const OneTree& t) {
    double b = 0.0;
    for (auto [a, c] : t.edges) b += d(a, c);
    for (int i = 0; i < n; ++i) b += pi(i) * (t.degrees[i] - 2);
    return b;
  };

  OneTree tree = minimum_1tree(d.matrix(), o.v1);
  PiVector best{pi, bound_of(tree), 0};
  const double t0 = tree.weight / (2.0 * n);
  double step = t0;
  int stale = 0;
  for (int it = 1; it <= max_iters && step >= o.min_step_ratio * t0; ++it) {
    bool tour = std::all_of(tree.degrees.begin(), tree.degrees.end(), [](int g) { return g == 2; });
    if (tour) break;
    for (int i = 0; i < n; ++i) pi(i) += step * (tree.degrees[i] - 2);
    tree = minimum_1tree(pi_transformed(d.matrix(), pi), o.v1);
    double b = bound_of(tree);
    best.iterations = it;
    if (b > best.lower_bound) {
      best.values = pi;
      best.lower_bound = b;
      stale = 0;
    } else if (++stale >= o.patience) {
      step *= 0.5;
      stale = 0;
    }
  }
  return best;
}

CandidateSets alpha_candidates(const DistanceMatrix& d, int m, const SubgradientOptions& o) {
  PiVector pi = subgradient_optimize(d, o);
  Matrix alpha = alpha_values(pi_transformed(d.matrix(), pi.values), o.v1);
  Matrix score = -alpha;
  return CandidateSets(CandidateSource::AlphaNearness, rank_by_score(score, m, &d.matrix()));
}

}  // namespace orthotsp
