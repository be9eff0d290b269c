#include "lava/transport.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lava/fast_exp.hpp"
#include "lava/parallel.hpp"

namespace lava {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fixed chunk grid for column-wise reductions over a row-major matrix.
/// The grid depends only on the row count, never on the thread count, and
/// partial results are merged in chunk order, so output is bit-identical
/// for any LAVA_THREADS setting.
struct ChunkGrid {
  Eigen::Index chunks;
  Eigen::Index rows_per_chunk;

  explicit ChunkGrid(Eigen::Index rows) {
    chunks = std::min<Eigen::Index>(rows, 64);
    rows_per_chunk = (rows + chunks - 1) / chunks;
  }
  Eigen::Index begin(Eigen::Index c) const { return c * rows_per_chunk; }
  Eigen::Index end(Eigen::Index c, Eigen::Index rows) const {
    return std::min(rows, (c + 1) * rows_per_chunk);
  }
};

double sum_ordered(const Eigen::VectorXd& partials) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < partials.size(); ++i) total += partials[i];
  return total;
}

Eigen::VectorXd safe_log(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = v[i] > 0.0 ? std::log(v[i]) : -kInf;
  }
  return out;
}

bool should_store_plan(PlanStorage policy, Eigen::Index n, Eigen::Index m) {
  switch (policy) {
    case PlanStorage::always:
      return true;
    case PlanStorage::never:
      return false;
    case PlanStorage::automatic:
      return n * m <= 1'000'000;
  }
  return false;
}

}  // namespace

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::sinkhorn:
      return "sinkhorn";
    case SolverMode::exact_lp:
      return "exact_lp";
    case SolverMode::log_barrier:
      return "log_barrier";
  }
  return "unknown";
}

SolverMode solver_mode_from_string(const std::string& name) {
  if (name == "sinkhorn") return SolverMode::sinkhorn;
  if (name == "exact_lp" || name == "exact") return SolverMode::exact_lp;
  if (name == "log_barrier" || name == "barrier") return SolverMode::log_barrier;
  fail(errc::invalid_argument, "unknown solver mode: " + name);
}

SolverConfig SolverConfig::sinkhorn(double epsilon, double tol) {
  SolverConfig cfg;
  cfg.mode = SolverMode::sinkhorn;
  cfg.epsilon = epsilon;
  cfg.tol = tol;
  return cfg;
}

SolverConfig SolverConfig::exact() {
  SolverConfig cfg;
  cfg.mode = SolverMode::exact_lp;
  cfg.epsilon = 0.0;
  cfg.tol = 1e-9;
  return cfg;
}

SolverConfig SolverConfig::barrier(double epsilon, double tol) {
  SolverConfig cfg;
  cfg.mode = SolverMode::log_barrier;
  cfg.epsilon = epsilon;
  cfg.tol = tol;
  return cfg;
}

CostMatrix::CostMatrix(MatrixRM values, Eigen::VectorXd row_measure,
                       Eigen::VectorXd col_measure)
    : values_(std::move(values)),
      row_measure_(std::move(row_measure)),
      col_measure_(std::move(col_measure)) {
  require(values_.rows() >= 1 && values_.cols() >= 1, errc::empty_dataset,
          "cost matrix must be at least 1x1");
  require(row_measure_.size() == values_.rows() &&
              col_measure_.size() == values_.cols(),
          errc::dimension_mismatch, "measure length does not match cost shape");
  require(values_.allFinite(), errc::non_finite_cost,
          "cost matrix has non-finite entries");
  require((values_.array() >= 0.0).all(), errc::non_finite_cost,
          "cost matrix has negative entries");
  for (const auto* measure : {&row_measure_, &col_measure_}) {
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < measure->size(); ++i) {
      require((*measure)[i] >= 0.0, errc::negative_mass,
              "negative mass in measure");
      total += (*measure)[i];
    }
    require(std::abs(static_cast<double>(total) - 1.0) <= 1e-12,
            errc::mass_sum_mismatch, "measure does not sum to 1");
  }
}

double CostMatrix::mean() const { return values_.mean(); }

CostMatrix CostMatrix::with_measures(Eigen::VectorXd row_measure,
                                     Eigen::VectorXd col_measure) const {
  return CostMatrix(values_, std::move(row_measure), std::move(col_measure));
}

CostMatrix CostMatrix::transposed() const {
  MatrixRM t = values_.transpose();
  return CostMatrix(std::move(t), col_measure_, row_measure_);
}

CostMatrix euclidean_cost(const MatrixRM& a, const MatrixRM& b,
                          Eigen::VectorXd row_measure,
                          Eigen::VectorXd col_measure, bool squared) {
  require(a.cols() == b.cols(), errc::dimension_mismatch,
          "feature dimension mismatch between the two point sets");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  const Eigen::Index d = a.cols();
  MatrixRM values(n, m);
  const bool parallel = n * m * d > 65536;

#pragma omp parallel for schedule(static) num_threads(max_threads()) \
    if (parallel)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* ai = a.data() + i * d;
    double* out = values.data() + i * m;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double* bj = b.data() + j * d;
      double acc = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        const double diff = ai[c] - bj[c];
        acc += diff * diff;
      }
      out[j] = squared ? acc : std::sqrt(acc);
    }
  }
  return CostMatrix(std::move(values), std::move(row_measure),
                    std::move(col_measure));
}

CostMatrix euclidean_cost(const MatrixRM& a, const MatrixRM& b, bool squared) {
  return euclidean_cost(
      a, b, Eigen::VectorXd::Constant(a.rows(), 1.0 / double(a.rows())),
      Eigen::VectorXd::Constant(b.rows(), 1.0 / double(b.rows())), squared);
}

// ---------------------------------------------------------------------------
// Sinkhorn
// ---------------------------------------------------------------------------

namespace {

/// One row rebalancing pass: f_i <- -eps * LSE_j((g_j - C_ij)/eps + log nu_j).
/// Returns the L1 row-marginal error of the state *before* the update, which
/// is free to compute from the change in f.
double sinkhorn_row_update(const MatrixRM& cost, double inv_eps, double eps,
                           const Eigen::VectorXd& mu,
                           const Eigen::VectorXd& col_shift,
                           Eigen::VectorXd& f) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  Eigen::VectorXd drift(n);
  const bool parallel = n * m > 32768;

#pragma omp parallel num_threads(max_threads()) if (parallel)
  {
    std::vector<double> buffer(m);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* row = cost.data() + i * m;
      for (Eigen::Index j = 0; j < m; ++j) {
        buffer[j] = col_shift[j] - inv_eps * row[j];
      }
      double peak = -kInf;
      for (Eigen::Index j = 0; j < m; ++j) {
        peak = buffer[j] > peak ? buffer[j] : peak;
      }
      detail::exp_inplace(buffer.data(), std::size_t(m), peak);
      const double sum = detail::sum_lanes(buffer.data(), std::size_t(m));
      const double updated = -eps * (peak + std::log(sum));
      drift[i] =
          mu[i] * std::abs(detail::fast_exp((f[i] - updated) * inv_eps) - 1.0);
      f[i] = updated;
    }
  }
  return sum_ordered(drift);
}

/// Column rebalancing pass over row-major storage, chunked deterministically.
double sinkhorn_col_update(const MatrixRM& cost, double inv_eps, double eps,
                           const Eigen::VectorXd& nu,
                           const Eigen::VectorXd& row_shift,
                           Eigen::VectorXd& g) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const ChunkGrid grid(n);
  const bool parallel = n * m > 32768;

  MatrixRM chunk_max = MatrixRM::Constant(grid.chunks, m, -kInf);
#pragma omp parallel for schedule(static) num_threads(max_threads()) \
    if (parallel)
  for (Eigen::Index c = 0; c < grid.chunks; ++c) {
    double* local = chunk_max.data() + c * m;
    for (Eigen::Index i = grid.begin(c); i < grid.end(c, n); ++i) {
      const double* row = cost.data() + i * m;
      const double shift = row_shift[i];
      for (Eigen::Index j = 0; j < m; ++j) {
        const double t = shift - inv_eps * row[j];
        local[j] = t > local[j] ? t : local[j];
      }
    }
  }
  Eigen::VectorXd peak = Eigen::VectorXd::Constant(m, -kInf);
  for (Eigen::Index c = 0; c < grid.chunks; ++c) {
    for (Eigen::Index j = 0; j < m; ++j) {
      peak[j] = std::max(peak[j], chunk_max(c, j));
    }
  }

  MatrixRM chunk_sum = MatrixRM::Zero(grid.chunks, m);
#pragma omp parallel num_threads(max_threads()) if (parallel)
  {
    std::vector<double> buffer(m);
#pragma omp for schedule(static)
    for (Eigen::Index c = 0; c < grid.chunks; ++c) {
      double* local = chunk_sum.data() + c * m;
      for (Eigen::Index i = grid.begin(c); i < grid.end(c, n); ++i) {
        const double* row = cost.data() + i * m;
        const double shift = row_shift[i];
        for (Eigen::Index j = 0; j < m; ++j) {
          buffer[j] = shift - inv_eps * row[j] - peak[j];
        }
        detail::exp_inplace(buffer.data(), std::size_t(m));
        for (Eigen::Index j = 0; j < m; ++j) local[j] += buffer[j];
      }
    }
  }

  double drift = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < grid.chunks; ++c) sum += chunk_sum(c, j);
    const double updated =
        sum > 0.0 ? -eps * (peak[j] + std::log(sum)) : g[j];
    drift += nu[j] * std::abs(detail::fast_exp((g[j] - updated) * inv_eps) - 1.0);
    g[j] = updated;
  }
  return drift;
}

struct SinkhornMetrics {
  double objective;
  double row_error;
  double col_error;
};

/// Streams the plan once: objective plus exact marginal errors.
SinkhornMetrics sinkhorn_metrics(const MatrixRM& cost, double inv_eps,
                                 const Eigen::VectorXd& mu,
                                 const Eigen::VectorXd& nu,
                                 const Eigen::VectorXd& row_shift,
                                 const Eigen::VectorXd& col_shift) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const ChunkGrid grid(n);

  Eigen::VectorXd row_err(n);
  Eigen::VectorXd obj_partial = Eigen::VectorXd::Zero(n);
  MatrixRM chunk_col = MatrixRM::Zero(grid.chunks, m);
  const bool parallel = n * m > 32768;

#pragma omp parallel num_threads(max_threads()) if (parallel)
  {
    std::vector<double> buffer(m);
#pragma omp for schedule(static)
    for (Eigen::Index c = 0; c < grid.chunks; ++c) {
      double* col_local = chunk_col.data() + c * m;
      for (Eigen::Index i = grid.begin(c); i < grid.end(c, n); ++i) {
        const double* row = cost.data() + i * m;
        const double shift = row_shift[i];
        for (Eigen::Index j = 0; j < m; ++j) {
          buffer[j] = shift + col_shift[j] - inv_eps * row[j];
        }
        detail::exp_inplace(buffer.data(), std::size_t(m));
        row_err[i] =
            std::abs(detail::sum_lanes(buffer.data(), std::size_t(m)) - mu[i]);
        obj_partial[i] = detail::dot_lanes(buffer.data(), row, std::size_t(m));
        for (Eigen::Index j = 0; j < m; ++j) col_local[j] += buffer[j];
      }
    }
  }

  SinkhornMetrics metrics{};
  metrics.objective = sum_ordered(obj_partial);
  metrics.row_error = sum_ordered(row_err);
  metrics.col_error = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double col_sum = 0.0;
    for (Eigen::Index c = 0; c < grid.chunks; ++c) col_sum += chunk_col(c, j);
    metrics.col_error += std::abs(col_sum - nu[j]);
  }
  return metrics;
}

}  // namespace

TransportSolution solve_sinkhorn(const CostMatrix& cost,
                                 const SolverConfig& cfg) {
  require(cfg.mode == SolverMode::sinkhorn, errc::invalid_argument,
          "solve_sinkhorn called with non-sinkhorn config");
  require(cfg.epsilon > 0.0, errc::invalid_argument,
          "sinkhorn requires epsilon > 0");
  require(cfg.max_iters >= 1, errc::invalid_argument,
          "sinkhorn requires at least one iteration");
  require(cost.values().allFinite(), errc::non_finite_cost,
          "cost matrix has non-finite entries");

  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const Eigen::VectorXd& mu = cost.row_measure();
  const Eigen::VectorXd& nu = cost.col_measure();
  const Eigen::VectorXd log_mu = safe_log(mu);
  const Eigen::VectorXd log_nu = safe_log(nu);

  // c-transform of g = 0 as the starting point.
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f[i] = cost.values().row(i).minCoeff();
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
  int iterations = 0;

  // Warm start through a fixed halving schedule when the target epsilon is
  // tiny relative to the cost scale; dramatically fewer iterations are then
  // needed at the final epsilon. The schedule is deterministic.
  const double mean_cost = cost.mean();
  std::vector<double> stages;
  if (mean_cost > 0.0 && cfg.epsilon < mean_cost / 50.0) {
    double stage = mean_cost / 10.0;
    while (stage > cfg.epsilon * 1.5) {
      stages.push_back(stage);
      stage *= 0.5;
    }
  }
  for (double stage_eps : stages) {
    const double inv_eps = 1.0 / stage_eps;
    Eigen::VectorXd col_shift(m), row_shift(n);
    // Always leave room for one round at the target epsilon: it bounds the
    // scaling state, keeping the reported plan and objective finite.
    for (int it = 0; it < 15 && iterations + 1 < cfg.max_iters; ++it) {
      col_shift = (g * inv_eps + log_nu).eval();
      sinkhorn_row_update(cost.values(), inv_eps, stage_eps, mu, col_shift, f);
      row_shift = (f * inv_eps + log_mu).eval();
      sinkhorn_col_update(cost.values(), inv_eps, stage_eps, nu, row_shift, g);
      ++iterations;
    }
  }

  const double eps = cfg.epsilon;
  const double inv_eps = 1.0 / eps;
  Eigen::VectorXd col_shift(m), row_shift(n);

  // Iterate until the *measured* marginal residual meets tol. The cheap
  // per-iteration drift bound decides when measuring is worth the extra pass.
  SinkhornMetrics metrics{};
  double drift_target = 0.25 * cfg.tol;
  while (true) {
    while (iterations < cfg.max_iters) {
      col_shift = (g * inv_eps + log_nu).eval();
      sinkhorn_row_update(cost.values(), inv_eps, eps, mu, col_shift, f);
      row_shift = (f * inv_eps + log_mu).eval();
      const double drift =
          sinkhorn_col_update(cost.values(), inv_eps, eps, nu, row_shift, g);
      ++iterations;
      if (drift <= drift_target) break;
    }
    row_shift = (f * inv_eps + log_mu).eval();
    col_shift = (g * inv_eps + log_nu).eval();
    metrics = sinkhorn_metrics(cost.values(), inv_eps, mu, nu, row_shift,
                               col_shift);
    if (std::max(metrics.row_error, metrics.col_error) <= cfg.tol ||
        iterations >= cfg.max_iters) {
      break;
    }
    drift_target *= 0.25;
  }

  // Re-gauge: pin the last column's potential to zero. The plan, objective,
  // and marginals are gauge-invariant.
  const double shift = g[m - 1];
  g.array() -= shift;
  f.array() += shift;
  row_shift = (f * inv_eps + log_mu).eval();
  col_shift = (g * inv_eps + log_nu).eval();

  TransportSolution sol;
  sol.dual_f = std::move(f);
  sol.dual_g = std::move(g);
  sol.objective = metrics.objective;
  sol.residual = std::max(metrics.row_error, metrics.col_error);
  sol.iterations = iterations;
  sol.mode = SolverMode::sinkhorn;
  sol.epsilon = eps;
  sol.converged = sol.residual <= cfg.tol;

  if (should_store_plan(cfg.plan, n, m)) {
    MatrixRM plan(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* row = cost.values().data() + i * m;
      double* out = plan.data() + i * m;
      for (Eigen::Index j = 0; j < m; ++j) {
        out[j] = row_shift[i] + col_shift[j] - inv_eps * row[j];
      }
      detail::exp_inplace(out, std::size_t(m));
    }
    sol.plan = std::move(plan);
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Log-barrier penalized transport (damped Newton on the gauged dual)
// ---------------------------------------------------------------------------

namespace {

struct BarrierWork {
  const MatrixRM& cost;
  const Eigen::VectorXd& mu;
  const Eigen::VectorXd& nu;
  double eps;

  double min_slack(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    double lowest = kInf;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        lowest = std::min(lowest, cost(i, j) - f[i] - g[j]);
      }
    }
    return lowest;
  }

  /// Concave dual value (up to additive constants).
  double dual_value(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    double value = f.dot(mu) + g.dot(nu);
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        const double slack = cost(i, j) - f[i] - g[j];
        if (slack <= 0.0) return -kInf;
        value += eps * std::log(slack);
      }
    }
    return value;
  }

  MatrixRM plan(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    MatrixRM pi(cost.rows(), cost.cols());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        pi(i, j) = eps / (cost(i, j) - f[i] - g[j]);
      }
    }
    return pi;
  }
};

}  // namespace

TransportSolution solve_log_barrier(const CostMatrix& cost,
                                    const SolverConfig& cfg) {
  require(cfg.mode == SolverMode::log_barrier, errc::invalid_argument,
          "solve_log_barrier called with non-barrier config");
  require(cfg.epsilon > 0.0, errc::invalid_argument,
          "log-barrier requires epsilon > 0");
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  require(n * m <= 4096, errc::instance_too_large,
          "log-barrier solver is an oracle for N*M <= 4096");
  require((cost.row_measure().array() > 0.0).all() &&
              (cost.col_measure().array() > 0.0).all(),
          errc::invalid_argument,
          "log-barrier solver requires strictly positive masses");

  const double eps = cfg.epsilon;
  const BarrierWork work{cost.values(), cost.row_measure(), cost.col_measure(),
                         eps};

  Eigen::VectorXd f(n), g = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    f[i] = cost.values().row(i).minCoeff() - 1.0;
  }

  const Eigen::Index unknowns = n + m - 1;  // gauge: g[m-1] fixed at 0
  Eigen::VectorXd gradient(unknowns);
  Eigen::MatrixXd hessian(unknowns, unknowns);
  int iterations = 0;
  bool converged = false;

  for (; iterations < cfg.max_iters; ++iterations) {
    const MatrixRM pi = work.plan(f, g);

    // Gradient of the concave dual: marginal defects.
    double residual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double defect = work.mu[i] - pi.row(i).sum();
      gradient[i] = defect;
      residual += std::abs(defect);
    }
    double col_defect_l1 = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double defect = work.nu[j] - pi.col(j).sum();
      if (j < m - 1) gradient[n + j] = defect;
      col_defect_l1 += std::abs(defect);
    }
    residual = std::max(residual, col_defect_l1);
    if (residual <= cfg.tol) {
      converged = true;
      break;
    }

    // Newton system on the negated (positive definite) Hessian.
    hessian.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      double diag = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        const double weight = pi(i, j) * pi(i, j) / eps;
        diag += weight;
        if (j < m - 1) {
          hessian(i, n + j) = weight;
          hessian(n + j, i) = weight;
        }
      }
      hessian(i, i) = diag;
    }
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
      double diag = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        diag += pi(i, j) * pi(i, j) / eps;
      }
      hessian(n + j, n + j) = diag;
    }

    Eigen::LDLT<Eigen::MatrixXd> factor(hessian);
    Eigen::VectorXd step = factor.solve(gradient);
    if (!step.allFinite()) {
      step = gradient;  // gradient ascent fallback
    }

    Eigen::VectorXd step_f = step.head(n);
    Eigen::VectorXd step_g = Eigen::VectorXd::Zero(m);
    step_g.head(m - 1) = step.tail(m - 1);

    // Fraction-to-boundary: keep every slack strictly positive.
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const double rate = step_f[i] + step_g[j];
        if (rate > 0.0) {
          const double slack = cost.values()(i, j) - f[i] - g[j];
          alpha = std::min(alpha, 0.95 * slack / rate);
        }
      }
    }

    auto defect_l1 = [&](const Eigen::VectorXd& fv, const Eigen::VectorXd& gv) {
      const MatrixRM candidate = work.plan(fv, gv);
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        total += std::abs(work.mu[i] - candidate.row(i).sum());
      }
      for (Eigen::Index j = 0; j < m; ++j) {
        total += std::abs(work.nu[j] - candidate.col(j).sum());
      }
      return total;
    };

    const double base_value = work.dual_value(f, g);
    double scale = alpha;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      const Eigen::VectorXd f_next = f + scale * step_f;
      const Eigen::VectorXd g_next = g + scale * step_g;
      if (work.dual_value(f_next, g_next) > base_value) {
        f = f_next;
        g = g_next;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      // Near the optimum the dual value is flat to double precision; fall
      // back to the marginal defect as the line-search merit.
      const Eigen::VectorXd f_next = f + alpha * step_f;
      const Eigen::VectorXd g_next = g + alpha * step_g;
      if (defect_l1(f_next, g_next) < defect_l1(f, g)) {
        f = f_next;
        g = g_next;
        accepted = true;
      }
    }
    if (!accepted) break;  // no measurable progress in any metric
  }

  MatrixRM pi = work.plan(f, g);

  // Re-gauge (the gauge is maintained exactly, but keep the invariant robust
  // to future edits).
  const double shift = g[m - 1];
  g.array() -= shift;
  f.array() += shift;

  TransportSolution sol;
  sol.plan = pi;
  sol.dual_f = std::move(f);
  sol.dual_g = std::move(g);
  sol.objective = (pi.array() * cost.values().array()).sum();
  double row_err = 0.0, col_err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    row_err += std::abs(pi.row(i).sum() - cost.row_measure()[i]);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    col_err += std::abs(pi.col(j).sum() - cost.col_measure()[j]);
  }
  sol.residual = std::max(row_err, col_err);
  sol.iterations = iterations;
  sol.mode = SolverMode::log_barrier;
  sol.epsilon = eps;
  sol.converged = sol.residual <= cfg.tol;
  return sol;
}

TransportSolution solve(const CostMatrix& cost, const SolverConfig& cfg) {
  switch (cfg.mode) {
    case SolverMode::sinkhorn:
      return solve_sinkhorn(cost, cfg);
    case SolverMode::exact_lp:
      return solve_exact_lp(cost, cfg);
    case SolverMode::log_barrier:
      return solve_log_barrier(cost, cfg);
  }
  fail(errc::invalid_argument, "unknown solver mode");
}

}  // namespace lava
