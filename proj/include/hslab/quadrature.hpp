#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hslab/geometry.hpp"

// Quadrature on meridian meshes.  All rules fold the axisymmetric measure
// c_n r^{n-2} into the weights, so plain weight sums give integrals over
// the ambient n-dimensional region.

namespace hslab {

// Gauss-Legendre on [0,1]
void gauss_legendre01(int m, std::vector<double>& pts,
                      std::vector<double>& wts);

// Gauss rule for the weight t^beta on [0,1], beta > -1 (Golub-Welsch)
void gauss_jacobi01(int m, double beta, std::vector<double>& pts,
                    std::vector<double>& wts);

struct CellRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts;   // physical points
  Eigen::Matrix<double, Eigen::Dynamic, 3> bary;  // barycentric coordinates
  Eigen::VectorXd w;
};

// point singularity |x - p|^{-expo} folded into the weights
struct SingularPoint {
  Vec2 p;
  double expo;
};

class SingularQuadrature {
 public:
  // default: one singular point of exponent s at the mesh origin node
  SingularQuadrature(const MeridianMesh& mesh, double s);
  SingularQuadrature(const MeridianMesh& mesh,
                     std::vector<SingularPoint> points);

  // smooth integrands; weights carry c_n r^{n-2} only
  const CellRule& cell_rule(int c) const { return regular_[c]; }
  // weights additionally carry the product of |x - p_i|^{-expo_i}
  const CellRule& cell_rule_singular(int c) const { return singular_[c]; }

  const std::vector<SingularPoint>& singular_points() const { return pts_; }
  double s() const { return s_; }

 private:
  void build(const MeridianMesh& mesh);
  std::vector<SingularPoint> pts_;
  double s_ = 0.0;
  std::vector<CellRule> regular_;
  std::vector<CellRule> singular_;
};

// one-off vertex-Duffy rule: integral over cell c of
// f(x) * |x - v|^{-expo} * c_n r^{n-2}, where v is a vertex of the cell
CellRule duffy_vertex_rule(const MeridianMesh& mesh, int c, const Vec2& v,
                           double expo, int m_rad = 12, int m_ang = 10);

// degree-5 rule on cell c, weights carrying c_n r^{n-2}
CellRule plain_cell_rule(const MeridianMesh& mesh, int c);

}  // namespace hslab
