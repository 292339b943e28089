#include "hslab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hslab {

namespace {

// Golub-Welsch from a symmetric three-term recurrence
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                  double mu0, std::vector<double>& pts,
                  std::vector<double>& wts) {
  const int m = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < m) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  pts.resize(m);
  wts.resize(m);
  for (int i = 0; i < m; ++i) {
    pts[i] = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    wts[i] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_legendre01(int m, std::vector<double>& pts,
                      std::vector<double>& wts) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(m - 1 > 0 ? m - 1 : 0);
  for (int k = 1; k < m; ++k)
    off[k - 1] = std::sqrt(k * k / (4.0 * k * k - 1.0));
  golub_welsch(diag, off, 2.0, pts, wts);
  for (int i = 0; i < m; ++i) {
    pts[i] = 0.5 * (1.0 + pts[i]);
    wts[i] *= 0.5;
  }
}

void gauss_jacobi01(int m, double beta, std::vector<double>& pts,
                    std::vector<double>& wts) {
  if (beta <= -1.0)
    throw std::invalid_argument("gauss_jacobi01: beta must be > -1");
  // weight (1+x)^beta on [-1,1]
  Eigen::VectorXd diag(m), off(m - 1 > 0 ? m - 1 : 0);
  diag[0] = beta / (beta + 2.0);
  for (int k = 1; k < m; ++k) {
    double d = 2.0 * k + beta;
    diag[k] = beta * beta / (d * (d + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    double d = 2.0 * k + beta;
    double num = 4.0 * k * k * (k + beta) * (k + beta);
    off[k - 1] = std::sqrt(num / (d * d * (d * d - 1.0)));
  }
  double mu0 = std::pow(2.0, beta + 1.0) / (beta + 1.0);
  golub_welsch(diag, off, mu0, pts, wts);
  double scale = std::pow(2.0, -beta - 1.0);
  for (int i = 0; i < m; ++i) {
    pts[i] = 0.5 * (1.0 + pts[i]);
    wts[i] *= scale;
  }
}

namespace {

// degree-5 Radon rule, barycentric points and unit-sum weights
struct TriRule {
  double bary[7][3];
  double w[7];
  TriRule() {
    const double r15 = std::sqrt(15.0);
    const double la = (6.0 - r15) / 21.0, wa = (155.0 - r15) / 1200.0;
    const double lb = (6.0 + r15) / 21.0, wb = (155.0 + r15) / 1200.0;
    double b[7][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                      {1 - 2 * la, la, la}, {la, 1 - 2 * la, la},
                      {la, la, 1 - 2 * la},
                      {1 - 2 * lb, lb, lb}, {lb, 1 - 2 * lb, lb},
                      {lb, lb, 1 - 2 * lb}};
    double ww[7] = {9.0 / 40, wa, wa, wa, wb, wb, wb};
    for (int i = 0; i < 7; ++i) {
      w[i] = ww[i];
      for (int j = 0; j < 3; ++j) bary[i][j] = b[i][j];
    }
  }
};
const TriRule kTriRule;

Eigen::Vector3d bary_of_point(const MeridianMesh& mesh, int c, const Vec2& x) {
  const auto& t = mesh.cells[c];
  const Vec2 &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]], &d = mesh.nodes[t[2]];
  Eigen::Matrix2d A;
  A.col(0) = b - a;
  A.col(1) = d - a;
  Eigen::Vector2d lam = A.inverse() * (x - a);
  return Eigen::Vector3d(1.0 - lam[0] - lam[1], lam[0], lam[1]);
}

}  // namespace

CellRule plain_cell_rule(const MeridianMesh& mesh, int c) {
  const auto& t = mesh.cells[c];
  const Vec2 &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]], &d = mesh.nodes[t[2]];
  const double area = mesh.cell_area(c);
  const double cn = mesh.weight_constant();
  const int we = mesh.weight_exponent;
  CellRule rule;
  rule.pts.resize(7, 2);
  rule.bary.resize(7, 3);
  rule.w.resize(7);
  for (int i = 0; i < 7; ++i) {
    Vec2 p = kTriRule.bary[i][0] * a + kTriRule.bary[i][1] * b +
             kTriRule.bary[i][2] * d;
    rule.pts.row(i) = p;
    for (int j = 0; j < 3; ++j) rule.bary(i, j) = kTriRule.bary[i][j];
    rule.w[i] = area * kTriRule.w[i] * cn * std::pow(p.y(), we);
  }
  return rule;
}

CellRule duffy_vertex_rule(const MeridianMesh& mesh, int c, const Vec2& v,
                           double expo, int m_rad, int m_ang) {
  const auto& t = mesh.cells[c];
  int iv = -1;
  for (int k = 0; k < 3; ++k)
    if ((mesh.nodes[t[k]] - v).norm() < 1e-12) iv = k;
  if (iv < 0)
    throw std::invalid_argument("duffy_vertex_rule: v is not a cell vertex");
  const Vec2 e1 = mesh.nodes[t[(iv + 1) % 3]] - v;
  const Vec2 e2 = mesh.nodes[t[(iv + 2) % 3]] - v;
  const double det = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  const double cn = mesh.weight_constant();
  const int we = mesh.weight_exponent;
  const bool on_axis = std::abs(v.y()) < 1e-12;

  const double beta = 1.0 + (on_axis ? we : 0) - expo;
  if (beta <= -1.0)
    throw std::invalid_argument("duffy_vertex_rule: singularity too strong");
  std::vector<double> tr, wr, tq, wq;
  gauss_jacobi01(m_rad, beta, tr, wr);
  gauss_legendre01(m_ang, tq, wq);

  CellRule rule;
  const int np = m_rad * m_ang;
  rule.pts.resize(np, 2);
  rule.bary.resize(np, 3);
  rule.w.resize(np);
  int i = 0;
  for (int jq = 0; jq < m_ang; ++jq) {
    Vec2 P = (1.0 - tq[jq]) * e1 + tq[jq] * e2;
    double Pn = P.norm();
    double base = det * wq[jq] * cn * std::pow(Pn, -expo);
    if (on_axis) base *= std::pow(P.y(), we);
    for (int jr = 0; jr < m_rad; ++jr, ++i) {
      Vec2 x = v + tr[jr] * P;
      rule.pts.row(i) = x;
      rule.bary.row(i) = bary_of_point(mesh, c, x);
      double w = base * wr[jr];
      if (!on_axis) w *= std::pow(x.y(), we);
      rule.w[i] = w;
    }
  }
  return rule;
}

SingularQuadrature::SingularQuadrature(const MeridianMesh& mesh, double s)
    : SingularQuadrature(mesh, {{mesh.nodes[mesh.origin_node], s}}) {
  s_ = s;
}

SingularQuadrature::SingularQuadrature(const MeridianMesh& mesh,
                                       std::vector<SingularPoint> points)
    : pts_(std::move(points)) {
  if (!pts_.empty()) s_ = pts_[0].expo;
  build(mesh);
}

void SingularQuadrature::build(const MeridianMesh& mesh) {
  const int nc = static_cast<int>(mesh.cells.size());
  regular_.resize(nc);
  singular_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    regular_[c] = plain_cell_rule(mesh, c);
    int at_vertex = -1;
    for (std::size_t k = 0; k < pts_.size(); ++k) {
      for (int j = 0; j < 3; ++j) {
        if ((mesh.nodes[mesh.cells[c][j]] - pts_[k].p).norm() < 1e-12) {
          if (at_vertex >= 0)
            throw std::runtime_error(
                "SingularQuadrature: two singular vertices in one cell");
          at_vertex = static_cast<int>(k);
        }
      }
    }
    CellRule rule;
    if (at_vertex >= 0)
      rule = duffy_vertex_rule(mesh, c, pts_[at_vertex].p,
                               pts_[at_vertex].expo);
    else
      rule = regular_[c];
    // remaining (smooth-here) singular factors
    for (std::size_t k = 0; k < pts_.size(); ++k) {
      if (static_cast<int>(k) == at_vertex) continue;
      for (Eigen::Index i = 0; i < rule.w.size(); ++i) {
        double d = (Vec2(rule.pts.row(i)) - pts_[k].p).norm();
        rule.w[i] *= std::pow(d, -pts_[k].expo);
      }
    }
    singular_[c] = std::move(rule);
  }
}

}  // namespace hslab
