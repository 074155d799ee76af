#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "rotopt/csv.hpp"
#include "rotopt/error.hpp"

namespace rotopt {

using Matrix = Eigen::MatrixXd;
using IntMatrix = Eigen::MatrixXi;
using Vector = Eigen::VectorXd;

// Size guard: 2^12 = 4096 is the largest supported dimension.
inline constexpr int kMaxDimensionExponent = 12;

// Sylvester-type Hadamard matrix of order 2^k, integer entries in {+1,-1}.
// H * H^T = 2^k * I exactly.
struct HadamardMatrix {
  int k = 0;
  IntMatrix entries;
  int order() const { return 1 << k; }
};

inline HadamardMatrix build_hadamard(int k) {
  if (k < 0) throw std::invalid_argument("build_hadamard: k must be >= 0");
  if (k > kMaxDimensionExponent)
    throw std::invalid_argument("build_hadamard: k=" + std::to_string(k) +
                                " exceeds the size guard k <= " +
                                std::to_string(kMaxDimensionExponent));
  IntMatrix h(1, 1);
  h(0, 0) = 1;
  for (int j = 1; j <= k; ++j) {
    const int m = 1 << (j - 1);
    IntMatrix next(2 * m, 2 * m);
    next.topLeftCorner(m, m) = h;
    next.topRightCorner(m, m) = h;
    next.bottomLeftCorner(m, m) = h;
    next.bottomRightCorner(m, m) = -h;
    h = std::move(next);
  }
  return {k, std::move(h)};
}

// Skew-symmetric generator A_{2^k} = (2^k - 1)^{-1/2} * A'_{2^k}, where A' is
// built recursively from Hadamard blocks. The construction yields A^2 = -I,
// which is verified by tests rather than assumed here.
struct SkewGenerator {
  int k = 0;
  IntMatrix raw;  // unnormalized A', entries in {-1, 0, +1}, zero diagonal
  double scale = 1.0;
  int dim() const { return 1 << k; }
  Matrix matrix() const { return scale * raw.cast<double>(); }
};

inline SkewGenerator build_skew_generator(int k) {
  if (k < 1) throw std::invalid_argument("build_skew_generator: k must be >= 1");
  if (k > kMaxDimensionExponent)
    throw std::invalid_argument("build_skew_generator: k=" + std::to_string(k) +
                                " exceeds the size guard k <= " +
                                std::to_string(kMaxDimensionExponent));
  IntMatrix a(1, 1);
  a(0, 0) = 0;
  for (int j = 1; j <= k; ++j) {
    const int m = 1 << (j - 1);
    const IntMatrix h = build_hadamard(j - 1).entries;
    IntMatrix next(2 * m, 2 * m);
    next.topLeftCorner(m, m) = a;
    next.topRightCorner(m, m) = h;
    next.bottomLeftCorner(m, m) = -h;
    next.bottomRightCorner(m, m) = a;
    a = std::move(next);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>((1 << k) - 1));
  return {k, std::move(a), scale};
}

inline double orthogonality_residual(const Matrix& q) {
  return (q * q.transpose() - Matrix::Identity(q.rows(), q.rows())).norm();
}

// Validated element of SO(n): Q Q^T = I and det Q = 1 within `tol`
// (Frobenius norm for the orthogonality residual).
struct RotationMatrix {
  Matrix entries;
  double tol = 1e-10;

  int n() const { return static_cast<int>(entries.rows()); }

  static RotationMatrix from_matrix(Matrix m, double tol = 1e-10) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("RotationMatrix: matrix must be square");
    if (m.rows() == 0)
      throw std::invalid_argument("RotationMatrix: empty matrix");
    const double ortho = orthogonality_residual(m);
    if (!(ortho <= tol))
      throw std::invalid_argument("RotationMatrix: not orthogonal, |QQ^T - I|_F = " +
                                  format_float(ortho) + " > tol " + format_float(tol));
    const double det = m.determinant();
    if (!(std::abs(det - 1.0) <= tol))
      throw std::invalid_argument("RotationMatrix: det = " + format_float(det) +
                                  ", not 1 within tol " + format_float(tol));
    return {std::move(m), tol};
  }

  static RotationMatrix identity(int n) {
    if (n < 1) throw std::invalid_argument("RotationMatrix::identity: n must be >= 1");
    return {Matrix::Identity(n, n), 1e-10};
  }
};

// Q_{2^k}(t) = exp(A t) = cos(t) I + sin(t) A, the closed form valid because
// A^2 = -I for these generators. This is the production path; exp_series
// below is the independent cross-check.
inline RotationMatrix family_rotation(const SkewGenerator& gen, double t) {
  if (!std::isfinite(t))
    throw std::invalid_argument("family_rotation: t must be finite");
  const int n = gen.dim();
  Matrix q = std::cos(t) * Matrix::Identity(n, n) + std::sin(t) * gen.matrix();
  return RotationMatrix::from_matrix(std::move(q));
}

// One-parameter subgroup t -> exp(A t); period 2*pi since A^2 = -I.
struct OneParamFamily {
  SkewGenerator generator;
  double period = 2.0 * std::numbers::pi;
  RotationMatrix rotation(double t) const { return family_rotation(generator, t); }
};

// Matrix exponential by scaling-and-squaring over the truncated power series:
// scale until the induced 1-norm is <= 0.5, sum terms until the next one has
// max entry < 1e-18, then square back. No structure assumed on the input.
inline Matrix exp_series(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("exp_series: matrix must be square");
  const int n = static_cast<int>(a.rows());
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  }
  const Matrix x = a / std::exp2(squarings);
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = Matrix::Identity(n, n);
  for (int j = 1; j <= 64; ++j) {
    term = (term * x) / static_cast<double>(j);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Oracle counterpart of family_rotation for arbitrary skew input.
inline RotationMatrix exp_skew(const Matrix& a, double result_tol = 1e-10) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("exp_skew: matrix must be square");
  const double skew_residual = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (!(skew_residual < 1e-12))
    throw std::invalid_argument("exp_skew: input is not skew-symmetric, |A + A^T|_max = " +
                                format_float(skew_residual));
  return RotationMatrix::from_matrix(exp_series(a), result_tol);
}

// Block expansion of a complex matrix: each entry a+bi becomes [a -b; b a].
// Unitary input with this map lands in SO(2n).
inline Matrix realify(const Matrix& re, const Matrix& im) {
  if (re.rows() != im.rows() || re.cols() != im.cols())
    throw std::invalid_argument("realify: real and imaginary parts must have the same shape");
  Matrix out(2 * re.rows(), 2 * re.cols());
  for (Eigen::Index i = 0; i < re.rows(); ++i) {
    for (Eigen::Index j = 0; j < re.cols(); ++j) {
      out(2 * i, 2 * j) = re(i, j);
      out(2 * i, 2 * j + 1) = -im(i, j);
      out(2 * i + 1, 2 * j) = im(i, j);
      out(2 * i + 1, 2 * j + 1) = re(i, j);
    }
  }
  return out;
}

// Matrix file format: first non-comment line is n, then n rows of n values
// (comma or whitespace separated) at 17 significant digits.
inline void write_matrix_csv(std::ostream& os, const Matrix& m) {
  os << m.rows() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      os << format_float(m(i, j));
    }
    os << "\n";
  }
}

inline Matrix read_matrix_csv(std::istream& is) {
  std::string line;
  long n = -1;
  Matrix m;
  long row = 0;
  while (std::getline(is, line)) {
    if (is_blank_or_comment(line)) continue;
    if (n < 0) {
      const auto header = parse_float_row(line);
      if (header.size() != 1 || header[0] < 1 || header[0] != std::floor(header[0]))
        throw std::invalid_argument("matrix csv: header must be a single positive integer n");
      n = static_cast<long>(header[0]);
      m.resize(n, n);
      continue;
    }
    if (row >= n) throw std::invalid_argument("matrix csv: more than n data rows");
    const auto vals = parse_float_row(line);
    if (static_cast<long>(vals.size()) != n)
      throw std::invalid_argument("matrix csv: row " + std::to_string(row + 1) + " has " +
                                  std::to_string(vals.size()) + " values, expected " +
                                  std::to_string(n));
    for (long j = 0; j < n; ++j) m(row, j) = vals[j];
    ++row;
  }
  if (n < 0) throw std::invalid_argument("matrix csv: missing header line");
  if (row != n) throw std::invalid_argument("matrix csv: expected " + std::to_string(n) +
                                            " data rows, got " + std::to_string(row));
  return m;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open matrix file: " + path);
  return read_matrix_csv(f);
}

}  // namespace rotopt
