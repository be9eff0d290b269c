#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lava/transport.hpp"

namespace lava {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Primal network simplex specialized to the dense transportation problem.
///
/// Nodes are the n supply rows followed by the m demand columns; the basis is
/// a spanning tree of n+m-1 arcs rooted at the last column node. Flows live
/// in a dense n x m matrix (nonbasic cells are exactly zero), potentials are
/// recomputed from the tree after every pivot. Pricing is Dantzig (most
/// negative reduced cost) over row blocks; a sustained run of degenerate
/// pivots switches to Bland's rule, which cannot cycle.
class TransportSimplex {
 public:
  TransportSimplex(const MatrixRM& cost, Eigen::VectorXd supply,
                   Eigen::VectorXd demand)
      : cost_(cost),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        n_(cost.rows()),
        m_(cost.cols()),
        flow_(MatrixRM::Zero(cost.rows(), cost.cols())),
        basic_(cost.rows() * cost.cols(), false),
        adjacency_(cost.rows() + cost.cols()),
        parent_(cost.rows() + cost.cols(), -1),
        parent_cell_(cost.rows() + cost.cols(), -1),
        order_(cost.rows() + cost.cols()),
        potential_(cost.rows() + cost.cols(), 0.0) {
    // Absorb the (<=1e-12) mass-sum discrepancy so the tree algebra closes.
    const double imbalance = supply_.sum() - demand_.sum();
    Eigen::Index widest = 0;
    demand_.maxCoeff(&widest);
    demand_[widest] += imbalance;

    double scale = 0.0;
    for (Eigen::Index i = 0; i < n_ * m_; ++i) {
      scale = std::max(scale, std::abs(cost_.data()[i]));
    }
    optimality_tol_ = scale > 0.0 ? 1e-12 * scale : 1e-300;
    degenerate_tol_ = 1e-15;
  }

  /// Runs to optimality; returns the pivot count.
  int run(int pivot_cap) {
    build_northwest_tree();
    refresh_tree();

    int pivots = 0;
    int degenerate_streak = 0;
    bool bland = false;
    while (true) {
      const Eigen::Index entering = bland ? price_bland() : price_dantzig();
      if (entering < 0) break;
      require(pivots < pivot_cap, errc::not_converged,
              "network simplex exceeded pivot cap");
      const double theta = pivot(entering);
      ++pivots;
      if (theta <= degenerate_tol_) {
        if (++degenerate_streak > 100 + 8 * int(n_ + m_)) bland = true;
      } else {
        degenerate_streak = 0;
      }
      refresh_tree();
    }
    return pivots;
  }

  const MatrixRM& flow() const { return flow_; }

  Eigen::VectorXd row_potentials() const {
    Eigen::VectorXd u(n_);
    for (Eigen::Index i = 0; i < n_; ++i) u[i] = potential_[i];
    return u;
  }
  Eigen::VectorXd col_potentials() const {
    Eigen::VectorXd v(m_);
    for (Eigen::Index j = 0; j < m_; ++j) v[j] = potential_[n_ + j];
    return v;
  }

 private:
  Eigen::Index cell(Eigen::Index i, Eigen::Index j) const {
    return i * m_ + j;
  }

  void add_arc(Eigen::Index i, Eigen::Index j) {
    basic_[cell(i, j)] = true;
    adjacency_[i].push_back(n_ + j);
    adjacency_[n_ + j].push_back(i);
  }

  void drop_arc(Eigen::Index i, Eigen::Index j) {
    basic_[cell(i, j)] = false;
    auto& from_row = adjacency_[i];
    from_row.erase(std::find(from_row.begin(), from_row.end(), n_ + j));
    auto& from_col = adjacency_[n_ + j];
    from_col.erase(std::find(from_col.begin(), from_col.end(), i));
  }

  void build_northwest_tree() {
    Eigen::VectorXd remaining_supply = supply_;
    Eigen::VectorXd remaining_demand = demand_;
    Eigen::Index i = 0, j = 0;
    while (true) {
      const double moved = std::min(remaining_supply[i], remaining_demand[j]);
      flow_(i, j) = moved;
      add_arc(i, j);
      remaining_supply[i] -= moved;
      remaining_demand[j] -= moved;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (remaining_supply[i] <= remaining_demand[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  /// Recomputes parents, a preorder walk, and dual potentials from the tree.
  /// Root is the last column node, pinned to potential zero.
  void refresh_tree() {
    const Eigen::Index root = n_ + m_ - 1;
    std::fill(parent_.begin(), parent_.end(), Eigen::Index{-1});
    order_.clear();
    order_.push_back(root);
    parent_[root] = root;
    potential_[root] = 0.0;
    for (std::size_t cursor = 0; cursor < order_.size(); ++cursor) {
      const Eigen::Index node = order_[cursor];
      for (const Eigen::Index next : adjacency_[node]) {
        if (parent_[next] != -1) continue;
        parent_[next] = node;
        const bool next_is_row = next < n_;
        const Eigen::Index i = next_is_row ? next : node;
        const Eigen::Index j = (next_is_row ? node : next) - n_;
        parent_cell_[next] = cell(i, j);
        // u_i + v_j = c_ij on every basic arc
        potential_[next] = cost_(i, j) - potential_[node];
        order_.push_back(next);
      }
    }
  }

  /// Most negative reduced cost over the whole matrix; -1 when optimal.
  Eigen::Index price_dantzig() const {
    double best = -optimality_tol_;
    Eigen::Index best_cell = -1;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double* row = cost_.data() + i * m_;
      const double u = potential_[i];
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (basic_[cell(i, j)]) continue;
        const double reduced = row[j] - u - potential_[n_ + j];
        if (reduced < best) {
          best = reduced;
          best_cell = cell(i, j);
        }
      }
    }
    return best_cell;
  }

  /// First cell (lexicographic) with negative reduced cost; -1 when optimal.
  Eigen::Index price_bland() const {
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double* row = cost_.data() + i * m_;
      const double u = potential_[i];
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (basic_[cell(i, j)]) continue;
        if (row[j] - u - potential_[n_ + j] < -optimality_tol_) {
          return cell(i, j);
        }
      }
    }
    return -1;
  }

  struct CycleArc {
    Eigen::Index i, j;
    bool decreases;
  };

  /// Adds the entering arc, shifts flow around the unique tree cycle, and
  /// drops the blocking arc. Returns the amount of flow moved.
  double pivot(Eigen::Index entering) {
    const Eigen::Index enter_i = entering / m_;
    const Eigen::Index enter_j = entering % m_;

    // Depths via the preorder parents.
    auto depth_of = [&](Eigen::Index node) {
      Eigen::Index depth = 0;
      while (parent_[node] != node) {
        node = parent_[node];
        ++depth;
      }
      return depth;
    };

    std::vector<CycleArc> cycle;
    Eigen::Index a = enter_i;           // row endpoint
    Eigen::Index b = n_ + enter_j;      // column endpoint
    Eigen::Index depth_a = depth_of(a);
    Eigen::Index depth_b = depth_of(b);

    // Climb to the common ancestor. Arcs on the column-endpoint side are
    // traversed with the cycle direction, arcs on the row-endpoint side
    // against it; with the entering flow set to +theta, an arc decreases
    // exactly when the climb crosses it col->row (b side) or row->col (a
    // side).
    auto climb = [&](Eigen::Index& node, bool b_side) {
      const Eigen::Index up = parent_[node];
      const Eigen::Index cell_id = parent_cell_[node];
      const Eigen::Index i = cell_id / m_;
      const Eigen::Index j = cell_id % m_;
      const bool node_is_row = node < n_;
      const bool decreases = b_side ? !node_is_row : node_is_row;
      cycle.push_back({i, j, decreases});
      node = up;
    };

    while (depth_a > depth_b) {
      climb(a, false);
      --depth_a;
    }
    while (depth_b > depth_a) {
      climb(b, true);
      --depth_b;
    }
    while (a != b) {
      climb(a, false);
      climb(b, true);
    }

    double theta = kInf;
    Eigen::Index leave_i = -1, leave_j = -1;
    for (const CycleArc& arc : cycle) {
      if (arc.decreases && flow_(arc.i, arc.j) < theta) {
        theta = flow_(arc.i, arc.j);
        leave_i = arc.i;
        leave_j = arc.j;
      }
    }
    require(leave_i >= 0, errc::not_converged,
            "transportation cycle without a blocking arc");

    for (const CycleArc& arc : cycle) {
      double& amount = flow_(arc.i, arc.j);
      amount += arc.decreases ? -theta : theta;
      if (amount < 0.0) amount = 0.0;  // clamp subtraction noise
    }
    flow_(enter_i, enter_j) = theta;
    flow_(leave_i, leave_j) = 0.0;  // leaving arc goes nonbasic exactly

    drop_arc(leave_i, leave_j);
    add_arc(enter_i, enter_j);
    return theta;
  }

  const MatrixRM& cost_;
  Eigen::VectorXd supply_, demand_;
  Eigen::Index n_, m_;
  MatrixRM flow_;
  std::vector<char> basic_;
  std::vector<std::vector<Eigen::Index>> adjacency_;
  std::vector<Eigen::Index> parent_;
  std::vector<Eigen::Index> parent_cell_;
  std::vector<Eigen::Index> order_;
  std::vector<double> potential_;
  double optimality_tol_ = 0.0;
  double degenerate_tol_ = 0.0;
};

}  // namespace

TransportSolution solve_exact_lp(const CostMatrix& cost,
                                 const SolverConfig& cfg) {
  require(cfg.mode == SolverMode::exact_lp, errc::invalid_argument,
          "solve_exact_lp called with non-exact config");
  require(cfg.epsilon == 0.0, errc::invalid_argument,
          "exact LP mode requires epsilon = 0");
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  require(n * m <= 1'000'000, errc::instance_too_large,
          "exact LP oracle limited to N*M <= 1e6");

  // Zero-mass points carry no constraint; solve on the positive-mass
  // sub-problem and back-fill feasible duals for the stripped points.
  std::vector<Eigen::Index> live_rows, live_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cost.row_measure()[i] > 0.0) live_rows.push_back(i);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (cost.col_measure()[j] > 0.0) live_cols.push_back(j);
  }
  const bool stripped = live_rows.size() != static_cast<std::size_t>(n) ||
                        live_cols.size() != static_cast<std::size_t>(m);

  MatrixRM sub_cost(live_rows.size(), live_cols.size());
  Eigen::VectorXd supply(live_rows.size()), demand(live_cols.size());
  for (std::size_t a = 0; a < live_rows.size(); ++a) {
    supply[a] = cost.row_measure()[live_rows[a]];
    for (std::size_t b = 0; b < live_cols.size(); ++b) {
      sub_cost(a, b) = cost.values()(live_rows[a], live_cols[b]);
    }
  }
  for (std::size_t b = 0; b < live_cols.size(); ++b) {
    demand[b] = cost.col_measure()[live_cols[b]];
  }

  TransportSimplex simplex(sub_cost, supply, demand);
  const int pivot_cap =
      std::max(cfg.max_iters, 200 * int(live_rows.size() + live_cols.size()));
  const int pivots = simplex.run(pivot_cap);

  MatrixRM plan = MatrixRM::Zero(n, m);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd sub_u = simplex.row_potentials();
  const Eigen::VectorXd sub_v = simplex.col_potentials();
  for (std::size_t a = 0; a < live_rows.size(); ++a) {
    f[live_rows[a]] = sub_u[a];
    for (std::size_t b = 0; b < live_cols.size(); ++b) {
      plan(live_rows[a], live_cols[b]) = simplex.flow()(a, b);
    }
  }
  for (std::size_t b = 0; b < live_cols.size(); ++b) {
    g[live_cols[b]] = sub_v[b];
  }
  if (stripped) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (cost.row_measure()[i] > 0.0) continue;
      double bound = kInf;
      for (Eigen::Index j = 0; j < m; ++j) {
        bound = std::min(bound, cost.values()(i, j) - g[j]);
      }
      f[i] = bound;
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      if (cost.col_measure()[j] > 0.0) continue;
      double bound = kInf;
      for (Eigen::Index i = 0; i < n; ++i) {
        bound = std::min(bound, cost.values()(i, j) - f[i]);
      }
      g[j] = bound;
    }
  }

  // Gauge: the removed (last column) constraint's dual is zero.
  const double shift = g[m - 1];
  g.array() -= shift;
  f.array() += shift;

  double objective = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (plan(i, j) != 0.0) objective += plan(i, j) * cost.values()(i, j);
    }
  }
  double row_err = 0.0, col_err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    row_err += std::abs(plan.row(i).sum() - cost.row_measure()[i]);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    col_err += std::abs(plan.col(j).sum() - cost.col_measure()[j]);
  }

  TransportSolution sol;
  sol.plan = std::move(plan);
  sol.dual_f = std::move(f);
  sol.dual_g = std::move(g);
  sol.objective = objective;
  sol.residual = std::max(row_err, col_err);
  sol.iterations = pivots;
  sol.mode = SolverMode::exact_lp;
  sol.epsilon = 0.0;
  sol.converged = true;
  return sol;
}

}  // namespace lava
