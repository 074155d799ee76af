#pragma once

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotopt/csv.hpp"
#include "rotopt/lie_rotations.hpp"

namespace rotopt {

// Finite signal set in R^n. Points are ordered; generated families use a
// deterministic lexicographic ordering so file output is reproducible.
struct Constellation {
  int n = 0;
  std::vector<Vector> points;
  std::string label;

  int size() const { return static_cast<int>(points.size()); }

  double mean_energy() const {
    double e = 0.0;
    for (const auto& p : points) e += p.squaredNorm();
    return e / static_cast<double>(points.size());
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("constellation: dimension must be >= 1");
    if (points.empty()) throw std::invalid_argument("constellation: no points");
    for (const auto& p : points)
      if (p.size() != n)
        throw std::invalid_argument("constellation: point dimension mismatch");
    for (size_t i = 0; i < points.size(); ++i)
      for (size_t j = i + 1; j < points.size(); ++j)
        if (points[i] == points[j])
          throw std::invalid_argument("constellation: points " + std::to_string(i) +
                                      " and " + std::to_string(j) + " coincide");
  }
};

// Shaping parameters for M-NUQAM: per-axis magnitudes {1, alpha_1..alpha_{q-3}}
// in the canonical representative (all > 1, strictly increasing).
struct NuqamParams {
  int q = 4;
  std::vector<double> alpha;

  void validate() const {
    if (q < 4 || q % 2 != 0)
      throw std::invalid_argument("nuqam: q must be an even integer >= 4");
    if (static_cast<int>(alpha.size()) != q - 3)
      throw std::invalid_argument("nuqam: expected " + std::to_string(q - 3) +
                                  " alpha values for q=" + std::to_string(q) + ", got " +
                                  std::to_string(alpha.size()));
    // {±1, ±alpha_i} gives 2(q-2) per-axis levels; squaring must yield 2^q
    // points, which forces q-2 = 2^(q/2-1). Holds only for q=4 and q=6.
    if (q - 2 != (1 << (q / 2 - 1)))
      throw std::invalid_argument(
          "nuqam: q=" + std::to_string(q) + " gives " + std::to_string(2 * (q - 2)) +
          " per-axis levels and " + std::to_string(4 * (q - 2) * (q - 2)) +
          " points, not 2^q = " + std::to_string(1 << q) +
          "; the {±1, ±alpha} family only realizes q=4 and q=6");
    double prev = 1.0;
    for (double a : alpha) {
      if (!(a > prev))
        throw std::invalid_argument("nuqam: alpha must be > 1 and strictly increasing");
      prev = a;
    }
  }
};

// Uniform grid is the alpha choice {3, 5, ...}: odd integers above 1.
inline std::vector<double> uniform_alpha(int q) {
  std::vector<double> a;
  for (int i = 0; i < q - 3; ++i) a.push_back(static_cast<double>(2 * i + 3));
  return a;
}

namespace detail {

inline std::string join_floats(const std::vector<double>& v, const char* sep = ";") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_float(v[i]);
  }
  return s;
}

// All (x, y) pairs of per-axis levels, lexicographic by level index.
inline Constellation grid_square(const std::vector<double>& levels, std::string label) {
  Constellation x;
  x.n = 2;
  x.label = std::move(label);
  x.points.reserve(levels.size() * levels.size());
  for (double a : levels)
    for (double b : levels) {
      Vector p(2);
      p << a, b;
      x.points.push_back(std::move(p));
    }
  return x;
}

}  // namespace detail

// Uniform M-QAM on the odd-integer grid {±1, ±3, ..., ±(sqrt(M)-1)}^2,
// unnormalized (mean energy for 16-QAM is 10, for 4-QAM is 2).
inline Constellation make_qam(int m) {
  if (m < 4) throw std::invalid_argument("make_qam: M must be >= 4");
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  if (side * side != m || (side & (side - 1)) != 0)
    throw std::invalid_argument("make_qam: M=" + std::to_string(m) +
                                " is not a power of two with even exponent (4, 16, 64, ...)");
  std::vector<double> levels;
  for (int v = -(side - 1); v <= side - 1; v += 2) levels.push_back(v);
  return detail::grid_square(levels, "qam M=" + std::to_string(m));
}

inline Constellation make_nuqam(const NuqamParams& params) {
  params.validate();
  std::vector<double> levels;
  for (auto it = params.alpha.rbegin(); it != params.alpha.rend(); ++it)
    levels.push_back(-*it);
  levels.push_back(-1.0);
  levels.push_back(1.0);
  for (double a : params.alpha) levels.push_back(a);
  return detail::grid_square(levels, "nuqam q=" + std::to_string(params.q) +
                                         " alpha=" + detail::join_floats(params.alpha));
}

// Cartesian product, lexicographic by (index in a, index in b).
inline Constellation direct_product(const Constellation& a, const Constellation& b) {
  a.validate();
  b.validate();
  Constellation out;
  out.n = a.n + b.n;
  out.label = "prod(" + a.label + " | " + b.label + ")";
  out.points.reserve(static_cast<size_t>(a.size()) * b.size());
  for (const auto& pa : a.points)
    for (const auto& pb : b.points) {
      Vector p(out.n);
      p << pa, pb;
      out.points.push_back(std::move(p));
    }
  return out;
}

// `copies`-fold product of a 2D block with itself (4D and 8D QAM variants).
inline Constellation power_product(const Constellation& x, int copies) {
  if (copies < 1) throw std::invalid_argument("power_product: copies must be >= 1");
  Constellation out = x;
  for (int c = 1; c < copies; ++c) out = direct_product(out, x);
  if (copies > 1) out.label = x.label + " copies=" + std::to_string(copies);
  return out;
}

// Scale so the mean point energy over all n dimensions is 1.
inline Constellation normalize_unit_energy(const Constellation& x) {
  const double es = x.mean_energy();
  if (!(es > 0.0))
    throw std::invalid_argument("normalize_unit_energy: constellation has zero energy");
  const double s = 1.0 / std::sqrt(es);
  Constellation out = x;
  for (auto& p : out.points) p *= s;
  return out;
}

inline Constellation rotate(const Constellation& x, const RotationMatrix& q) {
  if (q.n() != x.n)
    throw std::invalid_argument("rotate: rotation is " + std::to_string(q.n()) +
                                "-dimensional, constellation is " + std::to_string(x.n));
  Constellation out = x;
  for (auto& p : out.points) p = q.entries * p;
  return out;
}

// Constellation file format: first non-comment line "n M", then M rows of n
// values (comma or whitespace separated) at 17 significant digits.
inline void write_constellation_csv(std::ostream& os, const Constellation& x) {
  os << x.n << " " << x.size() << "\n";
  for (const auto& p : x.points) {
    for (int j = 0; j < x.n; ++j) {
      if (j) os << ",";
      os << format_float(p(j));
    }
    os << "\n";
  }
}

inline Constellation read_constellation_csv(std::istream& is, const std::string& label = "") {
  std::string line;
  Constellation x;
  x.label = label;
  long m = -1;
  while (std::getline(is, line)) {
    if (is_blank_or_comment(line)) continue;
    if (m < 0) {
      const auto header = parse_float_row(line);
      if (header.size() != 2 || header[0] < 1 || header[1] < 1 ||
          header[0] != std::floor(header[0]) || header[1] != std::floor(header[1]))
        throw std::invalid_argument("constellation csv: header must be 'n M'");
      x.n = static_cast<int>(header[0]);
      m = static_cast<long>(header[1]);
      x.points.reserve(m);
      continue;
    }
    if (static_cast<long>(x.points.size()) >= m)
      throw std::invalid_argument("constellation csv: more than M data rows");
    const auto vals = parse_float_row(line);
    if (static_cast<int>(vals.size()) != x.n)
      throw std::invalid_argument("constellation csv: row has " + std::to_string(vals.size()) +
                                  " values, expected n=" + std::to_string(x.n));
    Vector p(x.n);
    for (int j = 0; j < x.n; ++j) p(j) = vals[j];
    x.points.push_back(std::move(p));
  }
  if (m < 0) throw std::invalid_argument("constellation csv: missing header line");
  if (static_cast<long>(x.points.size()) != m)
    throw std::invalid_argument("constellation csv: expected " + std::to_string(m) +
                                " rows, got " + std::to_string(x.points.size()));
  x.validate();
  return x;
}

inline Constellation read_constellation_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open constellation file: " + path);
  auto stem = path;
  if (auto pos = stem.find_last_of('/'); pos != std::string::npos) stem = stem.substr(pos + 1);
  if (auto pos = stem.find_last_of('.'); pos != std::string::npos) stem = stem.substr(0, pos);
  return read_constellation_csv(f, stem);
}

}  // namespace rotopt
