#include "lava/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lava/rng.hpp"

namespace lava {
namespace {

Eigen::VectorXd calibrate(const Eigen::VectorXd& dual, bool& degenerate) {
  const Eigen::Index n = dual.size();
  if (n <= 1) {
    degenerate = true;
    return Eigen::VectorXd::Zero(n);
  }
  const double mean = dual.mean();
  const double scale = double(n) / double(n - 1);
  return scale * (dual.array() - mean).matrix();
}

std::vector<std::size_t> ascending_ranking(const Eigen::VectorXd& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[Eigen::Index(a)] < values[Eigen::Index(b)];
                   });
  return order;
}

/// Measure perturbed along the calibrated direction at `index`.
Eigen::VectorXd perturbed_measure(const Eigen::VectorXd& measure,
                                  std::size_t index, double delta) {
  const Eigen::Index n = measure.size();
  Eigen::VectorXd out = measure;
  const double spread = delta / double(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) out[i] -= spread;
  out[Eigen::Index(index)] = measure[Eigen::Index(index)] + delta;
  require((out.array() >= -1e-15).all(), errc::mass_would_go_negative,
          "perturbation drives a mass negative");
  for (Eigen::Index i = 0; i < n; ++i) out[i] = std::max(out[i], 0.0);
  // Keep the total exactly 1 for the solver's validation.
  const double drift = out.sum() - 1.0;
  Eigen::Index widest = 0;
  out.maxCoeff(&widest);
  out[widest] -= drift;
  return out;
}

double resolve_objective(const CostMatrix& cost, const SolverConfig& cfg,
                         std::size_t index, Side side, double delta) {
  const Eigen::VectorXd mu =
      side == Side::train
          ? perturbed_measure(cost.row_measure(), index, delta)
          : cost.row_measure();
  const Eigen::VectorXd nu =
      side == Side::valid
          ? perturbed_measure(cost.col_measure(), index, delta)
          : cost.col_measure();
  return solve_exact_lp(cost.with_measures(mu, nu), cfg).objective;
}

}  // namespace

ValuationReport calibrated_gradients(const TransportSolution& sol) {
  return calibrated_gradients(sol, Eigen::VectorXd(), Eigen::VectorXd());
}

ValuationReport calibrated_gradients(const TransportSolution& sol,
                                     const Eigen::VectorXd& masses_train,
                                     const Eigen::VectorXd& masses_valid) {
  ValuationReport report;
  report.calib_grad_train = calibrate(sol.dual_f, report.degenerate_train);
  report.calib_grad_valid = calibrate(sol.dual_g, report.degenerate_valid);
  report.values_train = -report.calib_grad_train;
  report.ranking_train = ascending_ranking(report.values_train);
  report.mode = sol.mode;
  report.epsilon = sol.epsilon;
  report.distance = sol.objective;
  report.residual = sol.residual;
  report.masses_train = masses_train;
  report.masses_valid = masses_valid;
  return report;
}

double predict_delta(const ValuationReport& report, std::size_t index,
                     Side side, double delta_mass) {
  const Eigen::VectorXd& gradient = side == Side::train
                                        ? report.calib_grad_train
                                        : report.calib_grad_valid;
  require(index < std::size_t(gradient.size()), errc::invalid_argument,
          "predict_delta: index out of range");
  const Eigen::VectorXd& masses =
      side == Side::train ? report.masses_train : report.masses_valid;
  if (delta_mass < 0.0 && masses.size() > 0) {
    require(-delta_mass <= masses[Eigen::Index(index)] + 1e-15,
            errc::mass_would_go_negative,
            "cannot remove more mass than the point carries");
  }
  return delta_mass * gradient[Eigen::Index(index)];
}

RadiusResult empirical_radius(const CostMatrix& cost, const SolverConfig& cfg,
                              std::size_t index, Side side, double tol_rel) {
  require(cfg.mode == SolverMode::exact_lp, errc::invalid_argument,
          "empirical_radius probes the exact LP");
  const Eigen::VectorXd& measure =
      side == Side::train ? cost.row_measure() : cost.col_measure();
  const Eigen::Index n = measure.size();
  require(index < std::size_t(n), errc::invalid_argument,
          "empirical_radius: index out of range");
  require(n >= 2, errc::degenerate_size,
          "empirical_radius needs at least two points on the probed side");

  const TransportSolution base = solve_exact_lp(cost, cfg);
  const ValuationReport report = calibrated_gradients(base);
  const double gradient = (side == Side::train
                               ? report.calib_grad_train
                               : report.calib_grad_valid)[Eigen::Index(index)];
  const double point_mass = measure[Eigen::Index(index)];

  RadiusResult result;
  // Spreading +delta drains delta/(n-1) from every other point, so the
  // largest feasible positive step is capped by the smallest other mass.
  double smallest_other = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != Eigen::Index(index)) {
      smallest_other = std::min(smallest_other, measure[i]);
    }
  }
  const double positive_cap =
      std::min(point_mass, (1.0 - 1e-12) * double(n - 1) * smallest_other);
  const double negative_cap = point_mass;

  auto matches = [&](double delta) {
    const double actual =
        resolve_objective(cost, cfg, index, side, delta) - base.objective;
    ++result.resolves;
    const double predicted = delta * gradient;
    if (actual == 0.0) return std::abs(predicted) <= 1e-12;
    return std::abs(predicted - actual) <= tol_rel * std::abs(actual);
  };

  auto bisect = [&](double cap, double sign) {
    if (cap <= 0.0) return 0.0;
    if (matches(sign * cap)) return cap;  // full range already accurate
    double good = 0.0, bad = cap;
    for (int probe = 0; probe < 39; ++probe) {
      if (bad - good <= 1e-4 * cap) break;
      const double mid = 0.5 * (good + bad);
      if (matches(sign * mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    return good;
  };

  result.negative_fraction =
      point_mass > 0.0 ? bisect(negative_cap, -1.0) / point_mass : 0.0;
  result.positive_fraction =
      point_mass > 0.0 ? bisect(positive_cap, +1.0) / point_mass : 0.0;
  return result;
}

GapCheck gap_recovery_check(const CostMatrix& cost, double epsilon,
                            std::size_t i, std::size_t k, std::size_t j,
                            Side side) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const Eigen::Index side_size = side == Side::train ? n : m;
  const Eigen::Index anchor_size = side == Side::train ? m : n;
  require(i < std::size_t(side_size) && k < std::size_t(side_size),
          errc::invalid_argument, "gap_recovery_check: index out of range");
  require(j < std::size_t(anchor_size), errc::invalid_argument,
          "gap_recovery_check: anchor index out of range");
  require(side_size >= 2, errc::degenerate_size,
          "calibrated gradients undefined for a single point");

  require(duals_unique(cost), errc::degenerate_duals,
          "exact duals failed the uniqueness screen");
  const TransportSolution exact = solve_exact_lp(cost, SolverConfig::exact());

  SolverConfig barrier_cfg = SolverConfig::barrier(epsilon, 1e-9);
  barrier_cfg.max_iters = 2000;
  const TransportSolution barrier = solve_log_barrier(cost, barrier_cfg);
  require(barrier.converged, errc::not_converged,
          "log-barrier solver did not converge for the gap check");

  const ValuationReport exact_report = calibrated_gradients(exact);
  const ValuationReport barrier_report = calibrated_gradients(barrier);
  const Eigen::VectorXd& exact_grad = side == Side::train
                                          ? exact_report.calib_grad_train
                                          : exact_report.calib_grad_valid;
  const Eigen::VectorXd& barrier_grad = side == Side::train
                                            ? barrier_report.calib_grad_train
                                            : barrier_report.calib_grad_valid;

  const MatrixRM& plan = *barrier.plan;
  const double pi_ij = side == Side::train ? plan(Eigen::Index(i), Eigen::Index(j))
                                           : plan(Eigen::Index(j), Eigen::Index(i));
  const double pi_kj = side == Side::train ? plan(Eigen::Index(k), Eigen::Index(j))
                                           : plan(Eigen::Index(j), Eigen::Index(k));
  const double ratio = double(side_size) / double(side_size - 1);

  GapCheck check;
  check.lhs = exact_grad[Eigen::Index(i)] - exact_grad[Eigen::Index(k)];
  check.rhs = barrier_grad[Eigen::Index(i)] - barrier_grad[Eigen::Index(k)] -
              epsilon * ratio * (1.0 / pi_kj - 1.0 / pi_ij);
  return check;
}

double rank_agreement(const CostMatrix& cost, const SolverConfig& cfg_entropic,
                      Eigen::Index size_cap) {
  require(std::max(cost.rows(), cost.cols()) <= size_cap,
          errc::instance_too_large,
          "instance exceeds the rank-agreement size cap");
  const TransportSolution exact = solve_exact_lp(cost, SolverConfig::exact());
  const TransportSolution entropic = solve_sinkhorn(cost, cfg_entropic);
  require(entropic.converged, errc::not_converged,
          "entropic solver did not converge for rank agreement");
  const ValuationReport exact_report = calibrated_gradients(exact);
  const ValuationReport entropic_report = calibrated_gradients(entropic);
  return spearman(exact_report.values_train, entropic_report.values_train);
}

bool duals_unique(const CostMatrix& cost, double drift_tol,
                  double perturbation) {
  const TransportSolution base = solve_exact_lp(cost, SolverConfig::exact());

  // Route 1: sign-flipped cost perturbation. A non-unique dual face lets the
  // perturbed problem land on a different vertex.
  Rng rng(0xC0FFEEULL);
  MatrixRM perturbed = cost.values();
  for (Eigen::Index i = 0; i < perturbed.rows(); ++i) {
    for (Eigen::Index j = 0; j < perturbed.cols(); ++j) {
      const double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
      double entry = perturbed(i, j) + sign * perturbation;
      perturbed(i, j) = std::max(entry, 0.0);
    }
  }
  const TransportSolution shifted = solve_exact_lp(
      CostMatrix(std::move(perturbed), cost.row_measure(), cost.col_measure()),
      SolverConfig::exact());
  double drift =
      std::max((base.dual_f - shifted.dual_f).cwiseAbs().maxCoeff(),
               (base.dual_g - shifted.dual_g).cwiseAbs().maxCoeff());

  // Route 2: solve the transposed problem; a different pivot path exposes
  // another vertex of a degenerate dual face.
  const TransportSolution transposed =
      solve_exact_lp(cost.transposed(), SolverConfig::exact());
  Eigen::VectorXd f_t = transposed.dual_g;  // roles swap back
  Eigen::VectorXd g_t = transposed.dual_f;
  const double gauge = g_t[g_t.size() - 1];
  g_t.array() -= gauge;
  f_t.array() += gauge;
  drift = std::max(drift, (base.dual_f - f_t).cwiseAbs().maxCoeff());
  drift = std::max(drift, (base.dual_g - g_t).cwiseAbs().maxCoeff());

  return drift <= drift_tol;
}

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  require(a.size() == b.size() && a.size() >= 2, errc::invalid_argument,
          "spearman needs two equal-length vectors");
  const Eigen::Index n = a.size();

  auto ranks = [n](const Eigen::VectorXd& v) {
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) {
                       return v[x] < v[y];
                     });
    Eigen::VectorXd rank(n);
    Eigen::Index pos = 0;
    while (pos < n) {
      Eigen::Index tie_end = pos;
      while (tie_end + 1 < n && v[order[tie_end + 1]] == v[order[pos]]) {
        ++tie_end;
      }
      const double average = 0.5 * double(pos + tie_end) + 1.0;
      for (Eigen::Index t = pos; t <= tie_end; ++t) rank[order[t]] = average;
      pos = tie_end + 1;
    }
    return rank;
  };

  const Eigen::VectorXd ra = ranks(a);
  const Eigen::VectorXd rb = ranks(b);
  const double mean_a = ra.mean();
  const double mean_b = rb.mean();
  const Eigen::VectorXd da = ra.array() - mean_a;
  const Eigen::VectorXd db = rb.array() - mean_b;
  const double denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (denom == 0.0) return 1.0;  // one side fully tied: treat as agreement
  return da.dot(db) / denom;
}

}  // namespace lava
