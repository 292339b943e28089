#pragma once

#include <vector>

#include "hslab/discretize.hpp"

// Numerical Green's functions for the coercive operator Delta + a on
// axisymmetric domains, plus the parametrix terms of the classical
// construction and empirical kernel-estimate fits.

namespace hslab {

// fundamental solution of the Laplacian: 1/((n-2) omega_{n-1} dist^{n-2})
double fundamental_kernel(double dist, int n);
// meridian points lie in a common ambient plane through the axis, so the
// meridian distance is the ambient distance
double fundamental_kernel(const Vec2& x, const Vec2& y, int n);

struct ParametrixTerm {
  int order = 0;
  std::vector<int> sample_nodes;  // axis node indices
  Eigen::MatrixXd values;         // values(i,j) = Gamma_order(x_i, x_j); diag 0
  double bound_constant = 0.0;    // sup |Gamma| |x-y|^{n - 2 order}
  double fitted_exponent = 0.0;   // log-log slope of |Gamma| against |x-y|
};

// Gamma_1(x,y) = -a(y) fundamental_kernel(x,y);
// Gamma_{i+1}(x,y) = int_Omega Gamma_i(x,z) Gamma_1(z,y) dz.
// Samples are restricted to axis nodes (ambient distances are meridian
// distances there); the convolution runs over the full ambient domain with
// vertex-graded quadrature at the two kernel singularities.  Depths beyond 2
// would need off-axis kernel values and are rejected.
std::vector<ParametrixTerm> parametrix_terms(const ScalarField& a,
                                             const MeridianMesh& mesh,
                                             int depth,
                                             std::vector<int> sample_nodes = {});

struct GreenKernel {
  int pole = -1;
  Vec2 x = Vec2::Zero();
  Eigen::VectorXd g;                // nodal field G_x; zero at Dirichlet nodes
  double reproduction_error = 0.0;  // worst relative duality defect
};

// interior axis nodes at graded depths, for the estimate suite
std::vector<int> default_poles(const MeridianMesh& mesh, int count = 4);
// interior nodes spread in radius and polar angle inside |x| < r_max
std::vector<int> spread_poles(const MeridianMesh& mesh, double r_max,
                              int n_radii = 3, int n_angles = 4);

// G_x = K^{-1} e_pole against one shared factorization, so the discrete
// kernel is exactly symmetric.  The plain nodal load makes the duality
// int G (Delta phi + a phi) = phi(pole) exact at the P1 level; the
// reproduction error is then measured with analytic Delta phi over a fixed
// panel of test functions vanishing on the boundary of the half-ball hull.
// Throws SolverError when Delta + a is not coercive.
std::vector<GreenKernel> greens_solve(const MeridianMesh& mesh,
                                      const ScalarField& a,
                                      const std::vector<int>& poles);
GreenKernel greens_solve(const MeridianMesh& mesh, const ScalarField& a,
                         int pole);

struct GreenConstants {
  double c_kernel = 0.0;             // sup |x-y|^{n-2} |G|
  double c_distance = 0.0;           // sup |x-y|^{n-1} |G| / d(y)
  double c_gradient = 0.0;           // sup |x-y|^{n-1} |grad_y G|
  double c_gradient_distance = 0.0;  // sup |x-y|^n |grad_y G| / d(x)
};

// empirical suprema over the kernels; the fit windows exclude |x-y| < 3h
// and points within 2h of boundary corners.  min_dist fixes a common
// physical floor so constants stay comparable across refinements.
GreenConstants estimate_constants(const MeridianMesh& mesh,
                                  const std::vector<GreenKernel>& kernels,
                                  double min_dist = 0.0);

struct BoundaryKernel {
  std::vector<int> poles;          // accepted pole nodes
  Eigen::VectorXd h;               // H(x) = -d_nu G_x(0) per accepted pole
  double c_upper = 0.0;            // sup |x|^n H(x) / d(x)
  double c_lower = 0.0;            // inf |x|^n H(x) / d(x)
  double rigidity_scale = 0.0;     // fitted c in H = c |x_1| / |x|^n
  double rigidity_residual = 0.0;  // max relative deviation from the fit
};

// H via a one-sided normal difference of G_x at the singular boundary
// point; poles within a few mesh layers of that point are dropped
BoundaryKernel boundary_kernel(const MeridianMesh& mesh, const ScalarField& a,
                               const std::vector<int>& poles);

// distance from a point to the Dirichlet part of the boundary
double dirichlet_distance(const MeridianMesh& mesh, const Vec2& x);

}  // namespace hslab
