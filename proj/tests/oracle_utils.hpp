#pragma once

// Test-only oracles, independent of the solver implementations they check.

#include <utility>
#include <vector>

#include "lava/rng.hpp"
#include "lava/transport.hpp"

namespace lava::testing {

inline CostMatrix random_instance(int n, int m, std::uint64_t seed,
                                  double scale = 2.0) {
  Rng rng(seed);
  MatrixRM c(n, m);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c.data()[i] = rng.next_unit() * scale + 0.01;
  }
  return CostMatrix(std::move(c), Eigen::VectorXd::Constant(n, 1.0 / n),
                    Eigen::VectorXd::Constant(m, 1.0 / m));
}

inline CostMatrix random_instance_nonuniform(int n, int m,
                                             std::uint64_t seed) {
  Rng rng(seed);
  MatrixRM c(n, m);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c.data()[i] = rng.next_unit() * 2.0 + 0.01;
  }
  Eigen::VectorXd mu(n), nu(m);
  for (int i = 0; i < n; ++i) mu[i] = 0.2 + rng.next_unit();
  for (int j = 0; j < m; ++j) nu[j] = 0.2 + rng.next_unit();
  mu /= mu.sum();
  nu /= nu.sum();
  mu[0] -= mu.sum() - 1.0;
  nu[0] -= nu.sum() - 1.0;
  return CostMatrix(std::move(c), std::move(mu), std::move(nu));
}

/// Brute-force transportation optimum: enumerates every basis (cell subsets
/// of size n+m-1 forming a spanning tree), solves the flows by leaf
/// elimination, and minimizes over the feasible ones. Only viable for tiny
/// instances; deliberately shares no code with the network simplex.
inline double brute_force_objective(const CostMatrix& cost) {
  const int n = int(cost.rows());
  const int m = int(cost.cols());
  const int cells = n * m;
  const int basis = n + m - 1;
  std::vector<int> idx(basis);
  for (int i = 0; i < basis; ++i) idx[i] = i;
  double best = std::numeric_limits<double>::infinity();

  while (true) {
    std::vector<double> supply(n), demand(m);
    for (int i = 0; i < n; ++i) supply[i] = cost.row_measure()[i];
    for (int j = 0; j < m; ++j) demand[j] = cost.col_measure()[j];
    std::vector<std::pair<int, int>> arcs;
    arcs.reserve(basis);
    for (const int k : idx) arcs.push_back({k / m, k % m});
    std::vector<int> degree(n + m, 0);
    for (const auto& [i, j] : arcs) {
      ++degree[i];
      ++degree[n + j];
    }

    std::vector<double> flow(basis, 0.0);
    std::vector<bool> used(basis, false);
    bool feasible = true;
    for (int round = 0; round < basis && feasible; ++round) {
      int leaf = -1;
      for (int a = 0; a < basis; ++a) {
        if (used[a]) continue;
        const auto& [i, j] = arcs[a];
        if (degree[i] == 1 || degree[n + j] == 1) {
          leaf = a;
          break;
        }
      }
      if (leaf < 0) {
        feasible = false;  // remaining arcs contain a cycle
        break;
      }
      const auto& [i, j] = arcs[leaf];
      const double amount = degree[i] == 1 ? supply[i] : demand[j];
      if (amount < -1e-12) {
        feasible = false;
        break;
      }
      flow[leaf] = amount;
      used[leaf] = true;
      supply[i] -= amount;
      demand[j] -= amount;
      --degree[i];
      --degree[n + j];
    }
    if (feasible) {
      double objective = 0.0;
      for (int a = 0; a < basis; ++a) {
        objective += flow[a] * cost.values()(arcs[a].first, arcs[a].second);
      }
      best = std::min(best, objective);
    }

    int pos = basis - 1;
    while (pos >= 0 && idx[pos] == cells - basis + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < basis; ++q) idx[q] = idx[q - 1] + 1;
  }
  return best;
}

/// First support column with at least two positive plan entries, plus the
/// first two of its rows: the anchor triple for the gap-recovery identity.
struct SupportAnchor {
  bool found = false;
  std::size_t i = 0, k = 0, j = 0;
};

inline SupportAnchor find_train_anchor(const MatrixRM& plan,
                                       double tol = 1e-9) {
  for (Eigen::Index j = 0; j < plan.cols(); ++j) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < plan.rows(); ++i) {
      if (plan(i, j) > tol) rows.push_back(i);
    }
    if (rows.size() >= 2) {
      return {true, std::size_t(rows[0]), std::size_t(rows[1]),
              std::size_t(j)};
    }
  }
  return {};
}

inline SupportAnchor find_valid_anchor(const MatrixRM& plan,
                                       double tol = 1e-9) {
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < plan.cols(); ++j) {
      if (plan(i, j) > tol) cols.push_back(j);
    }
    if (cols.size() >= 2) {
      return {true, std::size_t(cols[0]), std::size_t(cols[1]),
              std::size_t(i)};
    }
  }
  return {};
}

}  // namespace lava::testing
