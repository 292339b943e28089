#include "hslab/pohozaev.hpp"

#include <cmath>
#include <map>

#include "hslab/errors.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

namespace {

// 2-point Gauss along a meridian segment with the axisymmetric weight
template <typename F>
double edge_integral(const MeridianMesh& mesh, const Vec2& pa, const Vec2& pb,
                     const F& f) {
  const double g = 0.5 / std::sqrt(3.0);
  const double len = (pb - pa).norm();
  const double cn = mesh.weight_constant();
  double total = 0.0;
  for (double t : {0.5 - g, 0.5 + g}) {
    const Vec2 x = (1.0 - t) * pa + t * pb;
    total += 0.5 * len * cn * std::pow(std::max(x.y(), 0.0),
                                       mesh.weight_exponent) * f(x, t);
  }
  return total;
}

// variational flux recovery: the Dirichlet rows of the weak residual
// K u - F_p(u) - load(source) equal int (d_nu u) phi_i over the boundary,
// so dividing by the boundary lumped mass gives a nodal normal flux one
// order more accurate than one-sided cell gradients
Eigen::VectorXd boundary_flux(const MeridianMesh& mesh,
                              const SingularQuadrature& quad,
                              const Eigen::VectorXd& u, const ScalarField& a,
                              double p, const ScalarField& source) {
  WeightedOperator op = assemble(mesh, a);
  Eigen::VectorXd resid = op.full * u - nonlinear_rhs(mesh, quad, u, p);
  if (source) resid -= load_vector(mesh, source);

  const double cn = mesh.weight_constant();
  const double g = 0.5 / std::sqrt(3.0);
  Eigen::VectorXd bmass = Eigen::VectorXd::Zero(u.size());
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    const Vec2 &pa = mesh.nodes[e.a], &pb = mesh.nodes[e.b];
    const double len = (pb - pa).norm();
    for (double t : {0.5 - g, 0.5 + g}) {
      const Vec2 x = (1.0 - t) * pa + t * pb;
      const double w = 0.5 * len * cn *
                       std::pow(std::max(x.y(), 0.0), mesh.weight_exponent);
      bmass[e.a] += w * (1.0 - t);
      bmass[e.b] += w * t;
    }
  }
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(u.size());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    if (mesh.is_dirichlet(static_cast<int>(i)) && bmass[i] > 1e-300)
      sigma[i] = resid[i] / bmass[i];
  return sigma;
}

}  // namespace

PohozaevReport pohozaev_defect(const MeridianMesh& mesh,
                               const Eigen::VectorXd& u, const ScalarField& a,
                               double p, double s, double r,
                               const ScalarField& source,
                               const ScalarField& x_dot_grad_a) {
  const int n = mesh.n;
  const double two_star = 2.0 * (n - s) / (n - 2.0);
  const double p_eps = two_star - p;

  std::vector<char> in(mesh.cells.size(), 0);
  std::size_t n_in = 0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (mesh.cell_centroid(static_cast<int>(c)).norm() < r) {
      in[c] = 1;
      ++n_in;
    }
  }
  if (n_in == 0)
    throw ConfigError("pohozaev_defect: region contains no cells");

  PohozaevReport rep;
  rep.region_radius = r;

  SingularQuadrature quad(mesh, s);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (!in[c]) continue;
    const auto& t = mesh.cells[c];
    const Vec2 g = cell_gradient(mesh, static_cast<int>(c), u);
    const CellRule& sing = quad.cell_rule_singular(static_cast<int>(c));
    for (Eigen::Index q = 0; q < sing.w.size(); ++q) {
      const double uq = sing.bary(q, 0) * u[t[0]] + sing.bary(q, 1) * u[t[1]] +
                        sing.bary(q, 2) * u[t[2]];
      rep.lhs_volume += sing.w[q] * 0.5 * (n - 2.0) * p_eps / p *
                        std::pow(std::abs(uq), p);
    }
    const CellRule& reg = quad.cell_rule(static_cast<int>(c));
    for (Eigen::Index q = 0; q < reg.w.size(); ++q) {
      const Vec2 x = reg.pts.row(q);
      const double uq = reg.bary(q, 0) * u[t[0]] + reg.bary(q, 1) * u[t[1]] +
                        reg.bary(q, 2) * u[t[2]];
      double coeff = 0.0;
      if (a) coeff += a(x);
      if (x_dot_grad_a) coeff += 0.5 * x_dot_grad_a(x);
      rep.lhs_volume -= reg.w[q] * coeff * uq * uq;
      if (source)
        rep.lhs_volume -=
            reg.w[q] * (x.dot(g) + 0.5 * (n - 2.0) * uq) * source(x);
    }
  }

  // domain-boundary part: u = 0 there, so b(u) reduces to the normal term
  const Eigen::VectorXd sigma = boundary_flux(mesh, quad, u, a, p, source);
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    if (!in[e.cell]) continue;
    const Vec2 nu = mesh.edge_outward_normal(e);
    rep.rhs_boundary +=
        edge_integral(mesh, mesh.nodes[e.a], mesh.nodes[e.b],
                      [&](const Vec2& x, double t) {
                        const double dn = (1.0 - t) * sigma[e.a] + t * sigma[e.b];
                        return 0.5 * x.dot(nu) * dn * dn;
                      });
  }

  // interface toward the excluded cells: full Pohozaev flux b(u)
  std::map<std::pair<int, int>, std::vector<int>> shared;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    for (int k = 0; k < 3; ++k)
      shared[std::minmax(mesh.cells[c][k], mesh.cells[c][(k + 1) % 3])]
          .push_back(static_cast<int>(c));
  for (const auto& [key, cs] : shared) {
    if (cs.size() != 2 || in[cs[0]] == in[cs[1]]) continue;
    const int cin = in[cs[0]] ? cs[0] : cs[1];
    const auto [ia, ib] = key;
    const Vec2 &pa = mesh.nodes[ia], &pb = mesh.nodes[ib];
    Vec2 tang = pb - pa;
    Vec2 nu(tang.y(), -tang.x());
    nu.normalize();
    if (nu.dot(0.5 * (pa + pb) - mesh.cell_centroid(cin)) < 0.0) nu = -nu;
    const Vec2 g = cell_gradient(mesh, cin, u);
    const double dn = g.dot(nu);
    rep.rhs_sphere += edge_integral(
        mesh, pa, pb, [&](const Vec2& x, double t) {
          const double uq = (1.0 - t) * u[ia] + t * u[ib];
          const double xn = x.dot(nu);
          double b = x.dot(g) * dn - 0.5 * xn * g.squaredNorm() +
                     xn / p * std::pow(std::abs(uq), p) /
                         std::pow(std::max(x.norm(), 1e-300), s) +
                     0.5 * (n - 2.0) * uq * dn;
          if (a) b -= 0.5 * xn * a(x) * uq * uq;
          return b;
        });
  }

  rep.defect = rep.lhs_volume - rep.rhs_boundary - rep.rhs_sphere;
  return rep;
}

RatioPrediction ratio_prediction(const BubbleDecomposition& dec,
                                 const CurvatureData& curv) {
  if (dec.scales.empty() || dec.profiles.empty() ||
      dec.profiles.back().size() == 0)
    throw ConfigError("ratio_prediction: missing trace data");
  const std::size_t N = dec.scales.size() - 1;
  const MeridianMesh& pm = dec.profile_meshes[N];
  const Eigen::VectorXd& pf = dec.profiles[N];
  const int n = pm.n;
  const double s = pm.s;

  RatioPrediction pred;
  // one-sided trace integrals over the flat boundary part {x1 = 0}
  for (const auto& e : pm.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    const Vec2 &pa = pm.nodes[e.a], &pb = pm.nodes[e.b];
    const double scale = std::max(pa.norm(), pb.norm());
    if (std::abs(pa.x()) > 1e-10 * scale || std::abs(pb.x()) > 1e-10 * scale)
      continue;
    const Vec2 g = cell_gradient(pm, e.cell, pf);
    const double g1 = g.x() * g.x();
    pred.trace_x2 += edge_integral(pm, pa, pb, [&](const Vec2& x, double) {
      return x.squaredNorm() * g1;
    });
  }
  double alpha_avg = 0.0;
  for (double al : curv.alphas) alpha_avg += al;
  alpha_avg /= static_cast<double>(curv.alphas.size());
  pred.trace_ii0 = alpha_avg * pred.trace_x2;

  const double gap_expo = 2.0 * (2.0 - s);  // 2(2-s)
  for (std::size_t i = 0; i < dec.scales.size(); ++i) {
    const double alpha = dec.scales[i].alpha_measured;
    pred.alphas_measured.push_back(alpha);
    if (dec.profiles[i].size() == 0) continue;
    const double energy =
        gradient_energy(dec.profile_meshes[i], dec.profiles[i]);
    pred.denominator +=
        std::pow(alpha, -(n - 2.0) * (n - 2.0) / gap_expo) * energy;
  }
  if (pred.denominator <= 0.0)
    throw ConfigError("ratio_prediction: missing trace data");

  const double alpha_n = dec.scales[N].alpha_measured;
  const double front =
      (n - s) / ((n - 2.0) * (n - 2.0)) *
      std::pow(alpha_n, -(n - 1.0) * (n - 2.0) / gap_expo);
  pred.general_form = front * pred.trace_ii0 / pred.denominator;
  pred.mean_curvature_form = front *
                             curv.mean_curvature_trace / (n - 1.0) *
                             pred.trace_x2 / pred.denominator;
  return pred;
}

double boundary_gradient_integral(const MeridianMesh& mesh,
                                  const Eigen::VectorXd& u, double r) {
  double total = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    const Vec2 mid = 0.5 * (mesh.nodes[e.a] + mesh.nodes[e.b]);
    if (mid.norm() >= r) continue;
    const Vec2 nu = mesh.edge_outward_normal(e);
    const double g2 = cell_gradient(mesh, e.cell, u).squaredNorm();
    total += edge_integral(mesh, mesh.nodes[e.a], mesh.nodes[e.b],
                           [&](const Vec2& x, double) {
                             return x.dot(nu) * g2;
                           });
  }
  return total;
}

}  // namespace hslab
