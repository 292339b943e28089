#include "hslab/discretize.hpp"

#include <cmath>
#include <stdexcept>

namespace hslab {

namespace {

// P1 gradients: grad phi_k constant on the cell
void cell_grads(const MeridianMesh& mesh, int c, Vec2 g[3], double& area) {
  const auto& t = mesh.cells[c];
  const Vec2 &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]], &d = mesh.nodes[t[2]];
  area = mesh.cell_area(c);
  const double inv = 1.0 / (2.0 * area);
  g[0] = Vec2(b.y() - d.y(), d.x() - b.x()) * inv;
  g[1] = Vec2(d.y() - a.y(), a.x() - d.x()) * inv;
  g[2] = Vec2(a.y() - b.y(), b.x() - a.x()) * inv;
}

// int_cell c_n r^{n-2} (exact for integer weight exponents via the rule)
double cell_weighted_measure(const MeridianMesh& mesh, int c) {
  CellRule rule = plain_cell_rule(mesh, c);
  return rule.w.sum();
}

}  // namespace

Eigen::VectorXd WeightedOperator::restrict_free(const Eigen::VectorXd& u) const {
  Eigen::VectorXd uf(node_of_free.size());
  for (std::size_t i = 0; i < node_of_free.size(); ++i) uf[i] = u[node_of_free[i]];
  return uf;
}

Eigen::VectorXd WeightedOperator::extend_zero(const Eigen::VectorXd& uf) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(free_of_node.size());
  for (std::size_t i = 0; i < node_of_free.size(); ++i) u[node_of_free[i]] = uf[i];
  return u;
}

Eigen::VectorXd WeightedOperator::solve(const Eigen::VectorXd& rhs_full) const {
  return extend_zero(solve_free(restrict_free(rhs_full)));
}

Eigen::VectorXd WeightedOperator::solve_free(const Eigen::VectorXd& rf) const {
  if (!factor) throw std::runtime_error("WeightedOperator: no factorization");
  return factor->solve(rf);
}

WeightedOperator assemble(const MeridianMesh& mesh, const ScalarField& a) {
  const int nn = static_cast<int>(mesh.num_nodes());
  WeightedOperator op;
  op.free_of_node.assign(nn, -1);
  for (int i = 0; i < nn; ++i) {
    if (!mesh.is_dirichlet(i)) {
      op.free_of_node[i] = static_cast<int>(op.node_of_free.size());
      op.node_of_free.push_back(i);
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.cells.size() * 9);
  op.lumped_mass = Eigen::VectorXd::Zero(nn);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    Vec2 g[3];
    double area;
    cell_grads(mesh, static_cast<int>(c), g, area);
    const double wm = cell_weighted_measure(mesh, static_cast<int>(c));
    const CellRule rule = plain_cell_rule(mesh, static_cast<int>(c));
    double local[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) local[i][j] = g[i].dot(g[j]) * wm;
    if (a) {
      for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
        const double aw = a(Vec2(rule.pts.row(q))) * rule.w[q];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            local[i][j] += aw * rule.bary(q, i) * rule.bary(q, j);
      }
    }
    for (int i = 0; i < 3; ++i) {
      const int ni = mesh.cells[c][i];
      op.lumped_mass[ni] += wm / 3.0;
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(ni, mesh.cells[c][j], local[i][j]);
    }
  }
  op.full.resize(nn, nn);
  op.full.setFromTriplets(trip.begin(), trip.end());

  std::vector<Eigen::Triplet<double>> rtrip;
  for (int k = 0; k < op.full.outerSize(); ++k) {
    for (SpMat::InnerIterator it(op.full, k); it; ++it) {
      int fi = op.free_of_node[it.row()], fj = op.free_of_node[it.col()];
      if (fi >= 0 && fj >= 0) rtrip.emplace_back(fi, fj, it.value());
    }
  }
  op.reduced.resize(op.n_free(), op.n_free());
  op.reduced.setFromTriplets(rtrip.begin(), rtrip.end());

  op.factor = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
  op.factor->compute(op.reduced);
  op.coercive = op.factor->info() == Eigen::Success &&
                op.factor->vectorD().minCoeff() > 0.0;
  return op;
}

SpMat mass_matrix(const MeridianMesh& mesh, const ScalarField& c) {
  const int nn = static_cast<int>(mesh.num_nodes());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t cc = 0; cc < mesh.cells.size(); ++cc) {
    const CellRule rule = plain_cell_rule(mesh, static_cast<int>(cc));
    double local[3][3] = {};
    for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
      double w = rule.w[q];
      if (c) w *= c(Vec2(rule.pts.row(q)));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          local[i][j] += w * rule.bary(q, i) * rule.bary(q, j);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(mesh.cells[cc][i], mesh.cells[cc][j], local[i][j]);
  }
  SpMat M(nn, nn);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

double hs_integral(const MeridianMesh& mesh, const SingularQuadrature& quad,
                   const Eigen::VectorXd& u, double p) {
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const CellRule& rule = quad.cell_rule_singular(static_cast<int>(c));
    const auto& t = mesh.cells[c];
    for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
      const double uq = rule.bary(q, 0) * u[t[0]] + rule.bary(q, 1) * u[t[1]] +
                        rule.bary(q, 2) * u[t[2]];
      total += rule.w[q] * std::pow(std::abs(uq), p);
    }
  }
  return total;
}

double gradient_energy(const MeridianMesh& mesh, const Eigen::VectorXd& u) {
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    Vec2 g = cell_gradient(mesh, static_cast<int>(c), u);
    total += g.squaredNorm() * cell_weighted_measure(mesh, static_cast<int>(c));
  }
  return total;
}

double hs_quotient(const MeridianMesh& mesh, const SingularQuadrature& quad,
                   const Eigen::VectorXd& u, double p) {
  const double hs = hs_integral(mesh, quad, u, p);
  if (hs <= 0.0) throw std::invalid_argument("hs_quotient: u vanishes");
  return gradient_energy(mesh, u) / std::pow(hs, 2.0 / p);
}

Eigen::VectorXd nonlinear_rhs(const MeridianMesh& mesh,
                              const SingularQuadrature& quad,
                              const Eigen::VectorXd& u, double p) {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const CellRule& rule = quad.cell_rule_singular(static_cast<int>(c));
    const auto& t = mesh.cells[c];
    for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
      const double uq = rule.bary(q, 0) * u[t[0]] + rule.bary(q, 1) * u[t[1]] +
                        rule.bary(q, 2) * u[t[2]];
      const double val = rule.w[q] * std::pow(std::abs(uq), p - 2.0) * uq;
      for (int i = 0; i < 3; ++i) F[t[i]] += val * rule.bary(q, i);
    }
  }
  return F;
}

SpMat nonlinear_weight(const MeridianMesh& mesh, const SingularQuadrature& quad,
                       const Eigen::VectorXd& u, double p) {
  const int nn = static_cast<int>(mesh.num_nodes());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const CellRule& rule = quad.cell_rule_singular(static_cast<int>(c));
    const auto& t = mesh.cells[c];
    double local[3][3] = {};
    for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
      const double uq = rule.bary(q, 0) * u[t[0]] + rule.bary(q, 1) * u[t[1]] +
                        rule.bary(q, 2) * u[t[2]];
      const double w = rule.w[q] * (p - 1.0) * std::pow(std::abs(uq), p - 2.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          local[i][j] += w * rule.bary(q, i) * rule.bary(q, j);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(t[i], t[j], local[i][j]);
  }
  SpMat W(nn, nn);
  W.setFromTriplets(trip.begin(), trip.end());
  return W;
}

Eigen::VectorXd load_vector(const MeridianMesh& mesh,
                            const Eigen::VectorXd& f) {
  return mass_matrix(mesh) * f;
}

Eigen::VectorXd load_vector(const MeridianMesh& mesh, const ScalarField& f) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const CellRule rule = plain_cell_rule(mesh, static_cast<int>(c));
    const auto& t = mesh.cells[c];
    for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
      const double val = rule.w[q] * f(Vec2(rule.pts.row(q)));
      for (int i = 0; i < 3; ++i) b[t[i]] += val * rule.bary(q, i);
    }
  }
  return b;
}

Vec2 cell_gradient(const MeridianMesh& mesh, int c, const Eigen::VectorXd& u) {
  Vec2 g[3];
  double area;
  cell_grads(mesh, c, g, area);
  const auto& t = mesh.cells[c];
  return u[t[0]] * g[0] + u[t[1]] * g[1] + u[t[2]] * g[2];
}

}  // namespace hslab
