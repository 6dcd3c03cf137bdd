#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "orthotsp/error.hpp"

namespace orthotsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Euclidean is the unrounded norm used for generated unit-square instances;
// Euc2D and Ceil2D follow the TSPLIB rounding rules.
enum class EdgeWeightType { Euc2D, Ceil2D, Euclidean, Explicit };

struct Instance {
  std::string name;
  int n = 0;
  EdgeWeightType weight_type = EdgeWeightType::Euc2D;
  std::optional<std::vector<Point2>> coords;
  std::optional<Matrix> explicit_matrix;

  // Throws MalformedInput / AsymmetricInput when the invariants do not hold.
  void validate() const;
};

/// Parses the TSPLIB subset: TYPE TSP with EUC_2D, CEIL_2D or EXPLICIT weights
/// (FULL_MATRIX, UPPER_ROW, LOWER_ROW, UPPER_DIAG_ROW, LOWER_DIAG_ROW).
Instance parse_tsplib(std::string_view text);
Instance load_tsplib(const std::filesystem::path& path);

/// Uniform points in the unit square. The seed is recorded in the name.
Instance random_uniform_instance(int n, std::uint64_t seed);

class DistanceMatrix {
 public:
  // Validates zero diagonal, symmetry, finiteness and nonnegativity.
  explicit DistanceMatrix(Matrix entries, bool integral = false);

  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Matrix& matrix() const { return entries_; }

  // True when every entry is integer valued (TSPLIB nint/ceil instances).
  bool integral() const { return integral_; }

 private:
  Matrix entries_;
  bool integral_ = false;
};

DistanceMatrix build_distance_matrix(const Instance& inst);

/// TSPLIB nearest-integer rounding of the Euclidean norm.
double nint_distance(Point2 a, Point2 b);

class Tour {
 public:
  // `order` must be a permutation of 0..n-1.
  explicit Tour(std::vector<int> order);

  static Tour identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const { return order_; }
  int operator[](int pos) const { return order_[pos]; }

  std::optional<double> cached_cost() const { return cached_cost_; }
  Tour& set_cached_cost(double c) {
    cached_cost_ = c;
    return *this;
  }

  // Rotated so city 0 comes first, oriented so the second entry is the
  // smaller of city 0's two neighbours.
  Tour canonical() const;

  friend bool operator==(const Tour& a, const Tour& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<int> order_;
  std::optional<double> cached_cost_;
};

// Adjacency matrix of a Hamiltonian cycle. Only the undirected variant is used
// downstream; the directed one exists for completeness of the trace form.
class TourMatrix {
 public:
  static TourMatrix cycle(int n);
  static TourMatrix directed_cycle(int n);
  static TourMatrix from_tour(const Tour& t);

  // Accepts a 0/1 matrix and verifies it is a single undirected Hamiltonian
  // cycle. Throws MalformedInput otherwise.
  static TourMatrix from_adjacency(const Matrix& adjacency);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  bool directed() const { return directed_; }

  // Walks the cycle starting at city 0 towards its smaller neighbour.
  Tour to_tour() const;

 private:
  TourMatrix(Matrix m, bool directed) : entries_(std::move(m)), directed_(directed) {}
  Matrix entries_;
  bool directed_ = false;
};

double tour_cost(const DistanceMatrix& d, const Tour& t);

/// tr(Aᵀ Pᵀ B P). With A = D, B = T_undir and P a permutation matrix this is
/// twice the tour cost of tour_from_permutation(P). P may be any square matrix.
double trace_cost(const Matrix& a, const Matrix& b, const Matrix& p);
double trace_cost(const DistanceMatrix& d, const TourMatrix& t, const Matrix& p);

/// Row i of the matrix holds a one in the column of the city at position i,
/// so that Pᵀ T P is the adjacency matrix of the tour.
Matrix permutation_matrix(const Tour& t);
Tour tour_from_permutation(const Matrix& p);
bool is_permutation_matrix(const Matrix& p, double tol = 0.0);

/// Exhaustive search with the first city fixed. Limited to n <= 12.
Tour brute_force_optimum(const DistanceMatrix& d);

}  // namespace orthotsp
