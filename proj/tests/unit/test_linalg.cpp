#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "orthotsp/linalg.hpp"

using namespace orthotsp;

TEST_SUITE("linalg") {
  TEST_CASE("eigendecomposition of simple matrices") {
    SymEigen e = sym_eig(Matrix::Identity(3, 3));
    CHECK(e.values.isApprox(Vector::Ones(3)));
    SymEigen c = sym_eig(TourMatrix::cycle(4).matrix());
    CHECK(c.values(0) == doctest::Approx(-2.0));
    CHECK(std::abs(c.values(1)) < 1e-12);
    CHECK(std::abs(c.values(2)) < 1e-12);
    CHECK(c.values(3) == doctest::Approx(2.0));
  }

  TEST_CASE("reconstruction, orthogonality, trace and sign convention") {
    std::mt19937_64 rng(3);
    for (int n : {2, 6, 11}) {
      Matrix s = oracle::random_symmetric(n, rng);
      SymEigen e = sym_eig(s);
      CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - s).norm() <= 1e-8 * s.norm());
      CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm() <= 1e-10 * n);
      CHECK(std::abs(e.values.sum() - s.trace()) <= 1e-8 * s.norm());
      for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
      for (int c = 0; c < n; ++c) {
        Eigen::Index arg;
        e.vectors.col(c).cwiseAbs().maxCoeff(&arg);
        CHECK(e.vectors(arg, c) > 0.0);
      }
      SymEigen again = sym_eig(s);
      CHECK(again.vectors == e.vectors);
    }
  }

  TEST_CASE("asymmetric input rejected") {
    Matrix a{{0.0, 1.0}, {0.5, 0.0}};
    try {
      sym_eig(a);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AsymmetricInput);
    }
  }

  TEST_CASE("brackets") {
    std::mt19937_64 rng(4);
    Matrix a = Matrix::Random(4, 4), b = Matrix::Random(4, 4);
    CHECK(lie_bracket(a, a).norm() == 0.0);
    Matrix g = gen_lie_bracket(a, b);
    CHECK((g + g.transpose()).norm() < 1e-14);
    Matrix x{{0.0, 1.0}, {0.0, 0.0}}, y{{0.0, 0.0}, {1.0, 0.0}};
    CHECK(lie_bracket(x, y) == Matrix{{1.0, 0.0}, {0.0, -1.0}});
    CHECK_THROWS_AS(lie_bracket(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), Error);
    CHECK(ones(3) == Matrix::Ones(3, 3));
  }

  TEST_CASE("Cayley steps") {
    Matrix p = Matrix::Identity(3, 3);
    CHECK(cayley_step(p, Matrix::Zero(3, 3), 0.5) == p);
    Matrix m{{0.0, 1.0}, {-1.0, 0.0}};
    Matrix q = cayley_step(Matrix::Identity(2, 2), m, 2.0);
    CHECK((q - Matrix{{0.0, -1.0}, {1.0, 0.0}}).norm() < 1e-15);
    CHECK_THROWS_AS(cayley_step(p, Matrix::Identity(3, 3), 0.1), Error);
  }

  TEST_CASE("singular Cayley factor signals a step that is too large") {
    // I + h/2 M is singular only for non-skew M, so feed cayley directly.
    Matrix m = -2.0 * Matrix::Identity(2, 2);
    try {
      cayley(m, 1.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::StepTooLarge);
    }
  }

  TEST_CASE("orthogonality drift over composed steps") {
    std::mt19937_64 rng(5);
    const int n = 6;
    Matrix p = Matrix::Identity(n, n);
    for (int k = 0; k < 1000; ++k) {
      Matrix before = p;
      p = cayley_step(p, oracle::random_skew(n, rng), 0.05);
      CHECK(orthogonality_error(p) <= orthogonality_error(before) + 1e-10 * n);
    }
    CHECK(orthogonality_error(p) <= 1e-8);
  }

  TEST_CASE("Laplacian components") {
    Matrix tri = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    CHECK(laplacian_components(tri) == 1);
    Matrix two = Matrix::Zero(6, 6);
    two.topLeftCorner(3, 3) = tri;
    two.bottomRightCorner(3, 3) = tri;
    CHECK(laplacian_components(two) == 2);
    CHECK(laplacian_components(Matrix::Zero(5, 5)) == 5);
    Matrix bad = tri;
    bad(0, 1) = 2.0;
    bad(1, 0) = 2.0;
    CHECK_THROWS_AS(laplacian_components(bad), Error);
  }

  TEST_CASE("Laplacian count agrees with depth-first search") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 19);
      const double p = std::uniform_real_distribution<double>(0.02, 0.4)(rng);
      Matrix a = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (std::uniform_real_distribution<double>()(rng) < p) a(i, j) = a(j, i) = 1.0;
      CHECK(laplacian_components(a) == dfs_components(a));
    }
  }
}
