#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rotopt/lie_rotations.hpp"
#include "rotopt/rng.hpp"
#include "support/oracles.hpp"

using namespace rotopt;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("hadamard base cases and recursion", "[lie]") {
  const auto h0 = build_hadamard(0);
  REQUIRE(h0.entries.rows() == 1);
  CHECK(h0.entries(0, 0) == 1);

  const auto h1 = build_hadamard(1);
  IntMatrix expect1(2, 2);
  expect1 << 1, 1, 1, -1;
  CHECK(h1.entries == expect1);

  // one unfolding: blocks H2, H2, H2, -H2
  const auto h2 = build_hadamard(2);
  REQUIRE(h2.entries.rows() == 4);
  CHECK(h2.entries.topLeftCorner(2, 2) == expect1);
  CHECK(h2.entries.topRightCorner(2, 2) == expect1);
  CHECK(h2.entries.bottomLeftCorner(2, 2) == expect1);
  CHECK(h2.entries.bottomRightCorner(2, 2) == (-expect1).eval());
}

TEST_CASE("hadamard orthogonality is exact in integers", "[lie]") {
  for (int k = 0; k <= 6; ++k) {
    const auto h = build_hadamard(k).entries;
    const IntMatrix prod = h * h.transpose();
    const IntMatrix expect = IntMatrix::Identity(1 << k, 1 << k) * (1 << k);
    REQUIRE(prod == expect);
  }
}

TEST_CASE("size guards reject oversized k", "[lie]") {
  CHECK_THROWS_AS(build_hadamard(13), std::invalid_argument);
  CHECK_THROWS_AS(build_hadamard(-1), std::invalid_argument);
  CHECK_THROWS_AS(build_skew_generator(13), std::invalid_argument);
  CHECK_THROWS_AS(build_skew_generator(0), std::invalid_argument);
}

TEST_CASE("skew generator base cases", "[lie]") {
  const auto a2 = build_skew_generator(1);
  IntMatrix expect2(2, 2);
  expect2 << 0, 1, -1, 0;
  CHECK(a2.raw == expect2);
  CHECK(a2.scale == 1.0);

  const auto a4 = build_skew_generator(2);
  IntMatrix expect4(4, 4);
  expect4 << 0, 1, 1, 1,
      -1, 0, 1, -1,
      -1, -1, 0, 1,
      -1, 1, -1, 0;
  CHECK(a4.raw == expect4);
  CHECK(a4.scale == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("generators are exactly skew with A^2 = -I", "[lie]") {
  for (int k = 1; k <= 6; ++k) {
    const auto gen = build_skew_generator(k);
    REQUIRE(gen.raw == (-gen.raw.transpose()).eval());  // exact in integers
    CHECK(gen.raw.diagonal().isZero());
    CHECK(gen.raw.cwiseAbs().maxCoeff() == 1);
    const Matrix a = gen.matrix();
    const int n = gen.dim();
    const double err = (a * a + Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    CHECK(err < 1e-12);
  }
}

TEST_CASE("family rotation closed form matches series exponential", "[lie]") {
  CounterRng rng(101, 0);
  for (int k = 1; k <= 6; ++k) {
    const auto gen = build_skew_generator(k);
    const Matrix a = gen.matrix();
    for (int i = 0; i < 20; ++i) {
      const double t = 2.0 * kPi * rng.next_double();
      const auto q = family_rotation(gen, t);
      const Matrix e = exp_series(a * t);
      REQUIRE((q.entries - e).norm() < 1e-10);
    }
  }
}

TEST_CASE("family homomorphism and periodicity", "[lie]") {
  CounterRng rng(102, 0);
  const OneParamFamily family{build_skew_generator(2)};
  CHECK(family.period == Catch::Approx(2.0 * kPi));
  CHECK((family.rotation(0.0).entries - Matrix::Identity(4, 4)).norm() == 0.0);
  for (int i = 0; i < 40; ++i) {
    const double s = 4.0 * kPi * (rng.next_double() - 0.5);
    const double t = 4.0 * kPi * (rng.next_double() - 0.5);
    const Matrix lhs = family.rotation(s).entries * family.rotation(t).entries;
    CHECK((lhs - family.rotation(s + t).entries).norm() < 1e-10);
    CHECK((family.rotation(t + 2.0 * kPi).entries - family.rotation(t).entries).norm() < 1e-10);
  }
}

TEST_CASE("printed 4x4 pattern: a = cos t, b = sin t / sqrt(3)", "[lie]") {
  const auto gen = build_skew_generator(2);
  for (double t : {0.3, 1.0, 2.5, 0.5639}) {
    const double a = std::cos(t);
    const double b = std::sin(t) / std::sqrt(3.0);
    Matrix expect(4, 4);
    expect << a, b, b, b,
        -b, a, b, -b,
        -b, -b, a, b,
        -b, b, -b, a;
    CHECK((family_rotation(gen, t).entries - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("printed 8x8 pattern: a = cos t, b = sin t / sqrt(7)", "[lie]") {
  const auto gen = build_skew_generator(3);
  for (double t : {0.3, 1.0, 2.5}) {
    const double a = std::cos(t);
    const double b = std::sin(t) / std::sqrt(7.0);
    Matrix expect(8, 8);
    expect << a, b, b, b, b, b, b, b,
        -b, a, b, -b, b, -b, b, -b,
        -b, -b, a, b, b, b, -b, -b,
        -b, b, -b, a, b, -b, -b, b,
        -b, -b, -b, -b, a, b, b, b,
        -b, b, -b, b, -b, a, b, -b,
        -b, -b, b, b, -b, -b, a, b,
        -b, b, b, -b, -b, b, -b, a;
    CHECK((family_rotation(gen, t).entries - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("exp_skew basics", "[lie]") {
  CHECK((exp_skew(Matrix::Zero(3, 3)).entries - Matrix::Identity(3, 3)).norm() == 0.0);

  // 2x2 closed form
  for (double t : {0.2, 1.3, -2.0, 11.0}) {
    Matrix a(2, 2);
    a << 0, t, -t, 0;
    Matrix expect(2, 2);
    expect << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    CHECK((exp_skew(a).entries - expect).cwiseAbs().maxCoeff() < 1e-14);
  }

  Matrix bad(2, 2);
  bad << 0, 1, 1, 0;
  CHECK_THROWS_AS(exp_skew(bad), std::invalid_argument);
  CHECK_THROWS_AS(exp_skew(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("exp conjugation identity", "[lie]") {
  CounterRng rng(103, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracles::random_skew(4, rng);
    Matrix v(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) v(i, j) = rng.next_gaussian();
    if (std::abs(v.determinant()) < 1e-3) continue;
    const Matrix vinv = v.inverse();
    const Matrix lhs = exp_series(v * a * vinv);
    const Matrix rhs = v * exp_series(a) * vinv;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
  }
  // orthogonal conjugation keeps the input skew, so exp_skew applies directly
  const Matrix a = oracles::random_skew(4, rng);
  const Matrix v = exp_skew(oracles::random_skew(4, rng)).entries;
  const Matrix lhs = exp_skew(v * a * v.transpose()).entries;
  const Matrix rhs = v * exp_skew(a).entries * v.transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("exp_skew result passes SO(n) validation at larger norms", "[lie]") {
  CounterRng rng(104, 0);
  for (int n : {2, 3, 5, 8}) {
    const Matrix a = oracles::random_skew(n, rng, 4.0);  // forces several squarings
    const auto q = exp_skew(a);
    CHECK(orthogonality_residual(q.entries) < 1e-12);
    CHECK(std::abs(q.entries.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("rotation matrix validation", "[lie]") {
  CHECK_NOTHROW(RotationMatrix::from_matrix(Matrix::Identity(3, 3)));
  Matrix reflect = Matrix::Identity(2, 2);
  reflect(1, 1) = -1.0;  // orthogonal but det = -1
  CHECK_THROWS_AS(RotationMatrix::from_matrix(reflect), std::invalid_argument);
  Matrix skewed = Matrix::Identity(2, 2);
  skewed(0, 1) = 1e-6;
  CHECK_THROWS_AS(RotationMatrix::from_matrix(skewed), std::invalid_argument);
  CHECK_NOTHROW(RotationMatrix::from_matrix(skewed, 1e-2));  // explicit loose tolerance
}

TEST_CASE("realify basics and unitary property", "[lie]") {
  Matrix re(1, 1), im(1, 1);
  re << 0.0;
  im << 1.0;  // the imaginary unit
  Matrix expect(2, 2);
  expect << 0, -1, 1, 0;
  CHECK(realify(re, im) == expect);

  const Matrix id3 = realify(Matrix::Identity(3, 3), Matrix::Zero(3, 3));
  CHECK(id3 == Matrix::Identity(6, 6));

  CHECK_THROWS_AS(realify(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), std::invalid_argument);

  CounterRng rng(105, 0);
  for (int n : {2, 3, 4}) {
    const Eigen::MatrixXcd u = oracles::random_unitary(n, rng);
    const Matrix r = realify(u.real(), u.imag());
    CHECK_NOTHROW(RotationMatrix::from_matrix(r, 1e-10));
  }
}

TEST_CASE("matrix csv round trip keeps every bit", "[lie]") {
  const auto q = family_rotation(build_skew_generator(3), 1.0);
  std::stringstream ss;
  ss << "# comment line survives the reader\n";
  write_matrix_csv(ss, q.entries);
  const Matrix back = read_matrix_csv(ss);
  REQUIRE(back.rows() == 8);
  CHECK(back == q.entries);  // 17 significant digits round-trip exactly
  CHECK_NOTHROW(RotationMatrix::from_matrix(back));
}

TEST_CASE("matrix csv rejects malformed input", "[lie]") {
  std::stringstream bad1("2\n1,0\n");
  CHECK_THROWS_AS(read_matrix_csv(bad1), std::invalid_argument);
  std::stringstream bad2("2\n1,0,0\n0,1\n");
  CHECK_THROWS_AS(read_matrix_csv(bad2), std::invalid_argument);
  std::stringstream bad3("1,0\n0,1\n");
  CHECK_THROWS_AS(read_matrix_csv(bad3), std::invalid_argument);
}
