#pragma once

#include "hslab/blowup.hpp"
#include "hslab/discretize.hpp"
#include "hslab/geometry.hpp"

namespace hslab {

// Terms of the Pohozaev identity on W = Omega intersected with B_r.
// The region is realized discretely as the union of cells with centroid
// inside B_r, so both sides integrate over exactly the same set and the
// defect is pure discretization error.
struct PohozaevReport {
  double region_radius = 0.0;
  double lhs_volume = 0.0;    // volume terms, source correction included
  double rhs_boundary = 0.0;  // domain-boundary part (x,nu)(d_nu u)^2 / 2
  double rhs_sphere = 0.0;    // interface remainder toward the interior
  double defect = 0.0;        // lhs_volume - rhs_boundary - rhs_sphere
};

// x_dot_grad_a supplies (x, grad a); null means a is constant.
PohozaevReport pohozaev_defect(const MeridianMesh& mesh,
                               const Eigen::VectorXd& u, const ScalarField& a,
                               double p, double s, double r,
                               const ScalarField& source = nullptr,
                               const ScalarField& x_dot_grad_a = nullptr);

// Curvature-driven prediction of the limit of (2*(s) - p)/mu_N.
struct RatioPrediction {
  double general_form = 0.0;         // II_0 trace integral numerator
  double mean_curvature_form = 0.0;  // H(0)/(n-1) times the |x|^2 integral
  double trace_ii0 = 0.0;            // int_{x1=0} II_0(x,x)|grad u|^2
  double trace_x2 = 0.0;             // int_{x1=0} |x|^2 |grad u|^2
  double denominator = 0.0;          // weighted sum of bubble energies
  std::vector<double> alphas_measured;
};

RatioPrediction ratio_prediction(const BubbleDecomposition& dec,
                                 const CurvatureData& curv);

// int over the Dirichlet part of the boundary inside B_r of (x,nu)|grad u|^2
double boundary_gradient_integral(const MeridianMesh& mesh,
                                  const Eigen::VectorXd& u, double r);

}  // namespace hslab
