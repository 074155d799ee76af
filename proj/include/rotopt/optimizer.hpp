#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotopt/channel_objective.hpp"
#include "rotopt/constellation.hpp"
#include "rotopt/error.hpp"
#include "rotopt/lie_rotations.hpp"

namespace rotopt {

// Coarse grid over [t_min, t_max) followed by golden-section refinement
// around the best grid point. A single-point grid {t_min} skips refinement.
struct GridSpec {
  double t_min = 0.0;
  double t_max = 2.0 * std::numbers::pi;
  int coarse_points = 2048;
  double refine_tol = 1e-6;

  void validate() const {
    if (!(t_min < t_max)) throw std::invalid_argument("GridSpec: t_min must be < t_max");
    if (coarse_points < 1) throw std::invalid_argument("GridSpec: coarse_points must be >= 1");
    if (!(refine_tol > 0.0)) throw std::invalid_argument("GridSpec: refine_tol must be > 0");
  }
};

struct DescentSettings {
  double fd_step_rel = 1e-4;  // central-difference step, relative
  double armijo_c = 1e-4;
  double grad_tol = 1e-6;     // stop when the gradient inf-norm drops below
  int max_iters = 500;
  double min_step = 1e-14;    // line-search failure threshold
};

enum class OptStatus { kConverged, kMaxIters, kLineSearchFailed };

inline const char* status_name(OptStatus s) {
  switch (s) {
    case OptStatus::kConverged: return "converged";
    case OptStatus::kMaxIters: return "max_iters";
    case OptStatus::kLineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

struct TraceEntry {
  std::vector<double> params;
  double objective = 0.0;
};

struct OptimizationResult {
  std::optional<double> best_t;
  std::vector<double> best_alpha;
  double objective_at_best = 0.0;
  double objective_baseline = 0.0;
  std::vector<TraceEntry> trace;
  OptStatus status = OptStatus::kConverged;

  double improvement() const { return objective_at_best - objective_baseline; }
};

// Ties within this window resolve to the smaller parameter, which
// canonicalizes the representative among symmetry-equivalent maxima.
inline constexpr double kTieEps = 1e-12;

template <typename F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double c = b - (b - a) * invphi;
  double d = a + (b - a) * invphi;
  double fc = f(c), fd = f(d);
  double best_x = fc >= fd ? c : d;
  double best_v = std::max(fc, fd);
  while (b - a > tol) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * invphi;
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * invphi;
      fc = f(c);
    }
    const double x = fc >= fd ? c : d;
    const double v = std::max(fc, fd);
    if (v > best_v + kTieEps || (v > best_v - kTieEps && x < best_x)) {
      best_v = v;
      best_x = x;
    }
  }
  return {best_x, best_v};
}

namespace detail {

inline SkewGenerator generator_for_dimension(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  if ((1 << k) != n || k < 1)
    throw std::invalid_argument("dimension " + std::to_string(n) +
                                " is not 2^k with k >= 1; supply a generator");
  return build_skew_generator(k);
}

}  // namespace detail

// Maximize R(X, Q(t)) over the one-parameter family: exhaustive coarse grid
// (t=0 always included as the baseline candidate) then golden-section
// refinement around the winning grid point. Smallest maximizer wins ties.
inline OptimizationResult best_rotation_t(const Constellation& x, const NoiseSpec& noise,
                                          const GridSpec& grid,
                                          const SkewGenerator* generator = nullptr) {
  grid.validate();
  x.validate();
  const SkewGenerator gen =
      generator ? *generator : detail::generator_for_dimension(x.n);
  if (gen.dim() != x.n)
    throw std::invalid_argument("best_rotation_t: generator dimension mismatch");

  OptimizationResult res;
  auto objective = [&](double t) {
    const double v = jensen_rate(rotate(x, family_rotation(gen, t)), noise);
    res.trace.push_back({{t}, v});
    return v;
  };

  const double baseline = objective(0.0);
  double best_t = 0.0, best_v = baseline;
  auto consider = [&](double t, double v) {
    if (v > best_v + kTieEps || (v > best_v - kTieEps && t < best_t)) {
      best_v = v;
      best_t = t;
    }
  };

  const double span = grid.t_max - grid.t_min;
  const double step = span / grid.coarse_points;
  for (int i = 0; i < grid.coarse_points; ++i) {
    const double t = grid.t_min + i * step;
    consider(t, t == 0.0 ? baseline : objective(t));
  }

  if (grid.coarse_points >= 2 && step > grid.refine_tol) {
    const double lo = std::max(grid.t_min, best_t - step);
    const double hi = std::min(grid.t_max, best_t + step);
    const auto [rt, rv] = golden_section_max(objective, lo, hi, grid.refine_tol);
    consider(rt, rv);
  }

  res.best_t = best_t;
  res.objective_at_best = best_v;
  res.objective_baseline = baseline;
  std::sort(res.trace.begin(), res.trace.end(),
            [](const TraceEntry& a, const TraceEntry& b) { return a.params[0] < b.params[0]; });
  return res;
}

namespace detail {

// Keeps alpha in the canonical region: alpha_1 > 1, strictly increasing.
inline std::vector<double> project_alpha(std::vector<double> a) {
  constexpr double gap = 1e-6;
  double prev = 1.0;
  for (double& v : a) {
    v = std::max(v, prev + gap);
    prev = v;
  }
  return a;
}

struct AscentOutcome {
  std::vector<double> point;
  double value = 0.0;
  OptStatus status = OptStatus::kConverged;
};

// Projected gradient ascent: central differences, backtracking (halving)
// line search with an Armijo acceptance test, doubling memory on the step.
template <typename F>
AscentOutcome ascend_projected(F&& f, std::vector<double> start, const DescentSettings& gd,
                               std::vector<TraceEntry>* trace) {
  AscentOutcome out;
  out.point = project_alpha(std::move(start));
  out.value = f(out.point);
  if (!std::isfinite(out.value))
    throw NumericalError("gradient ascent: objective is not finite at the start");
  if (trace) trace->push_back({out.point, out.value});
  out.status = OptStatus::kMaxIters;

  const int dim = static_cast<int>(out.point.size());
  std::vector<double> grad(dim);
  double step_memory = 1.0;
  for (int iter = 0; iter < gd.max_iters; ++iter) {
    double gnorm = 0.0, g2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double h = gd.fd_step_rel * std::max(1.0, std::abs(out.point[i]));
      auto up = out.point, dn = out.point;
      up[i] += h;
      dn[i] -= h;
      grad[i] = (f(up) - f(dn)) / (2.0 * h);
      gnorm = std::max(gnorm, std::abs(grad[i]));
      g2 += grad[i] * grad[i];
    }
    if (gnorm < gd.grad_tol) {
      out.status = OptStatus::kConverged;
      return out;
    }
    double tau = step_memory;
    bool accepted = false;
    while (tau > gd.min_step) {
      std::vector<double> cand(dim);
      for (int i = 0; i < dim; ++i) cand[i] = out.point[i] + tau * grad[i];
      cand = project_alpha(std::move(cand));
      const double fc = f(cand);
      if (fc >= out.value + gd.armijo_c * tau * g2) {
        out.point = std::move(cand);
        out.value = fc;
        if (trace) trace->push_back({out.point, out.value});
        step_memory = std::min(tau * 2.0, 1e3);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      out.status = OptStatus::kLineSearchFailed;
      return out;
    }
  }
  return out;
}

}  // namespace detail

// Ascend R(X(alpha)) in the shaping parameter; the candidate constellation is
// re-normalized inside the objective so shaping cannot trade on energy. The
// uniform-QAM alpha is always a candidate, so the result never falls below
// the uniform baseline.
inline OptimizationResult optimize_alpha(int q, const NoiseSpec& noise,
                                         const NuqamParams& init, const DescentSettings& gd) {
  if (init.q != q) throw std::invalid_argument("optimize_alpha: init.q != q");
  init.validate();
  auto objective = [&](const std::vector<double>& a) {
    return jensen_rate(normalize_unit_energy(make_nuqam({q, a})), noise);
  };

  OptimizationResult res;
  auto outcome = detail::ascend_projected(objective, init.alpha, gd, &res.trace);
  res.status = outcome.status;

  const std::vector<double> uniform = uniform_alpha(q);
  res.objective_baseline = objective(uniform);
  if (outcome.value >= res.objective_baseline) {
    res.best_alpha = outcome.point;
    res.objective_at_best = outcome.value;
  } else {
    res.best_alpha = uniform;
    res.objective_at_best = res.objective_baseline;
  }
  return res;
}

// Coordinate ascent over (alpha, t) for 2D NUQAM under Q_2(t): alternate the
// shaping ascent at fixed t with the rotation line search at fixed alpha
// until a round improves by less than round_tol. The incumbent is always a
// candidate in each half-step, so rounds are monotone.
inline OptimizationResult joint_optimize(int q, const NoiseSpec& noise, const GridSpec& grid,
                                         const DescentSettings& gd,
                                         const NuqamParams* init = nullptr,
                                         int max_rounds = 20, double round_tol = 1e-9) {
  if (max_rounds < 1) throw std::invalid_argument("joint_optimize: max_rounds must be >= 1");
  std::vector<double> alpha = init ? init->alpha : uniform_alpha(q);
  NuqamParams{q, alpha}.validate();
  const SkewGenerator gen = build_skew_generator(1);

  auto objective = [&](const std::vector<double>& a, double t) {
    return jensen_rate(
        rotate(normalize_unit_energy(make_nuqam({q, a})), family_rotation(gen, t)), noise);
  };

  OptimizationResult res;
  double t = 0.0;
  double value = objective(alpha, t);
  res.trace.push_back({[&] {
                         auto p = alpha;
                         p.push_back(t);
                         return p;
                       }(),
                       value});
  res.status = OptStatus::kMaxIters;

  for (int round = 0; round < max_rounds; ++round) {
    const double round_start = value;

    auto alpha_objective = [&](const std::vector<double>& a) { return objective(a, t); };
    auto outcome = detail::ascend_projected(alpha_objective, alpha, gd, nullptr);
    if (outcome.value >= value) {
      alpha = outcome.point;
      value = outcome.value;
    }

    const Constellation xa = normalize_unit_energy(make_nuqam({q, alpha}));
    const auto rot = best_rotation_t(xa, noise, grid, &gen);
    if (rot.objective_at_best > value + kTieEps ||
        (rot.objective_at_best > value - kTieEps && *rot.best_t < t)) {
      t = *rot.best_t;
      value = rot.objective_at_best;
    }

    auto params = alpha;
    params.push_back(t);
    res.trace.push_back({params, value});
    if (value - round_start < round_tol) {
      res.status = OptStatus::kConverged;
      break;
    }
  }

  res.objective_baseline = objective(uniform_alpha(q), 0.0);
  if (value >= res.objective_baseline) {
    res.best_alpha = alpha;
    res.best_t = t;
    res.objective_at_best = value;
  } else {
    res.best_alpha = uniform_alpha(q);
    res.best_t = 0.0;
    res.objective_at_best = res.objective_baseline;
  }
  return res;
}

// A rotation column in an SNR sweep: the identity, the per-SNR-optimized
// family rotation, a fixed family member, or an external matrix from file.
struct RotationSource {
  enum class Kind { kIdentity, kFamily, kFamilyFixedT, kExternal };
  Kind kind = Kind::kIdentity;
  std::string name = "identity";
  double t = 0.0;
  std::optional<RotationMatrix> matrix;

  static RotationSource identity() { return {}; }
  static RotationSource family() { return {Kind::kFamily, "family", 0.0, {}}; }
  static RotationSource family_fixed(double t) {
    return {Kind::kFamilyFixedT, "family t=" + format_float(t), t, {}};
  }
  static RotationSource external(std::string name, RotationMatrix m) {
    return {Kind::kExternal, std::move(name), std::numeric_limits<double>::quiet_NaN(),
            std::move(m)};
  }
};

struct SweepRow {
  double ebn0_db = 0.0;
  std::string constellation;
  std::string rotation;
  double t_or_alpha = 0.0;
  double r_bits = 0.0;
  double delta_r_bits = 0.0;
};

struct SweepSettings {
  std::vector<double> ebn0_db;
  GridSpec grid;
  EbConvention convention = EbConvention::kPerSymbol;
  bool normalize = true;
};

// For each dB value and rotation source, evaluate R on the (rotated)
// constellation and report the delta against the unrotated baseline (the
// constellation itself when no separate baseline is given). The family
// source re-optimizes t at every dB value.
inline std::vector<SweepRow> snr_sweep(const Constellation& x, const Constellation* baseline,
                                       const std::vector<RotationSource>& rotations,
                                       const SweepSettings& settings) {
  if (settings.ebn0_db.empty())
    throw std::invalid_argument("snr_sweep: empty E_b/N_0 list");
  settings.grid.validate();
  const Constellation xn = settings.normalize ? normalize_unit_energy(x) : x;
  const Constellation bn = baseline
                               ? (settings.normalize ? normalize_unit_energy(*baseline) : *baseline)
                               : xn;

  std::vector<SweepRow> rows;
  for (double db : settings.ebn0_db) {
    const NoiseSpec noise_x = noise_for(xn, db, settings.convention);
    const NoiseSpec noise_b = noise_for(bn, db, settings.convention);
    const double r_base = jensen_rate(bn, noise_b);
    for (const auto& src : rotations) {
      SweepRow row;
      row.ebn0_db = db;
      row.constellation = xn.label;
      row.rotation = src.name;
      switch (src.kind) {
        case RotationSource::Kind::kIdentity:
          row.t_or_alpha = 0.0;
          row.r_bits = jensen_rate(xn, noise_x);
          break;
        case RotationSource::Kind::kFamily: {
          const auto opt = best_rotation_t(xn, noise_x, settings.grid);
          row.t_or_alpha = *opt.best_t;
          row.r_bits = opt.objective_at_best;
          break;
        }
        case RotationSource::Kind::kFamilyFixedT: {
          const SkewGenerator gen = detail::generator_for_dimension(xn.n);
          row.t_or_alpha = src.t;
          row.r_bits = jensen_rate(rotate(xn, family_rotation(gen, src.t)), noise_x);
          break;
        }
        case RotationSource::Kind::kExternal:
          row.t_or_alpha = std::numeric_limits<double>::quiet_NaN();
          row.r_bits = jensen_rate(rotate(xn, *src.matrix), noise_x);
          break;
      }
      row.delta_r_bits = row.r_bits - r_base;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace rotopt
