#pragma once

#include <functional>
#include <memory>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hslab/geometry.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

using ScalarField = std::function<double(const Vec2&)>;
using SpMat = Eigen::SparseMatrix<double>;

// Bilinear form int (grad u . grad v + a u v) c_n r^{n-2} with Dirichlet
// elimination.  The axis r = 0 is a natural boundary.
struct WeightedOperator {
  SpMat full;                       // all nodes
  SpMat reduced;                    // free nodes only
  std::vector<int> free_of_node;    // -1 at Dirichlet nodes
  std::vector<int> node_of_free;
  Eigen::VectorXd lumped_mass;      // weighted lumped mass, all nodes
  bool coercive = false;            // positive LDLT pivots on free nodes
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> factor;

  int n_free() const { return static_cast<int>(node_of_free.size()); }
  Eigen::VectorXd restrict_free(const Eigen::VectorXd& u) const;
  Eigen::VectorXd extend_zero(const Eigen::VectorXd& uf) const;
  // solve reduced * uf = rhs_free and extend by zero
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs_full) const;
  Eigen::VectorXd solve_free(const Eigen::VectorXd& rhs_free) const;
};

WeightedOperator assemble(const MeridianMesh& mesh, const ScalarField& a);

// weighted mass matrix int c u v c_n r^{n-2}, all nodes
SpMat mass_matrix(const MeridianMesh& mesh, const ScalarField& c = nullptr);

// int_Omega |u|^p |x|^{-s} dV for the nodal interpolant of u
double hs_integral(const MeridianMesh& mesh, const SingularQuadrature& quad,
                   const Eigen::VectorXd& u, double p);

// int_Omega |grad u|^2 dV
double gradient_energy(const MeridianMesh& mesh, const Eigen::VectorXd& u);

// gradient_energy / hs_integral^{2/p}
double hs_quotient(const MeridianMesh& mesh, const SingularQuadrature& quad,
                   const Eigen::VectorXd& u, double p);

// F(u)_i = int |u|^{p-2} u phi_i |x|^{-s} dV (all nodes)
Eigen::VectorXd nonlinear_rhs(const MeridianMesh& mesh,
                              const SingularQuadrature& quad,
                              const Eigen::VectorXd& u, double p);

// W(u)_ij = int (p-1)|u|^{p-2} phi_i phi_j |x|^{-s} dV (all nodes)
SpMat nonlinear_weight(const MeridianMesh& mesh, const SingularQuadrature& quad,
                       const Eigen::VectorXd& u, double p);

// load vector b_i = int f phi_i dV for a nodal field f (all nodes)
Eigen::VectorXd load_vector(const MeridianMesh& mesh, const Eigen::VectorXd& f);
Eigen::VectorXd load_vector(const MeridianMesh& mesh, const ScalarField& f);

// constant P1 gradient on a cell
Vec2 cell_gradient(const MeridianMesh& mesh, int c, const Eigen::VectorXd& u);

}  // namespace hslab
