#include "hslab/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hslab/discretize.hpp"
#include "hslab/interpolate.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= 0.0 || xs[i] <= 0.0) continue;
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

HalfspaceBubble solve_halfspace(double s, int n, double R,
                                int meridian_samples, double gap,
                                double h_min_rel) {
  if (R < 10.0) throw ConfigError("solve_halfspace: R must be >= 10");
  DomainSpec spec;
  spec.n = n;
  spec.s = s;
  spec.kappa = 0.0;
  spec.radius = R;
  spec.meridian_samples = meridian_samples;
  spec.h_min_rel = h_min_rel;
  Domain dom = make_domain(spec);

  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.s = s;
  pb.max_iter = 20000;
  pb.p = pb.p_critical() - gap;
  ExtremalResult res;
  if (gap < 0.02) {
    // tight gaps concentrate slowly; warm start from a moderate gap
    pb.p = pb.p_critical() - 0.02;
    ExtremalResult pre = minimize_quotient(pb);
    pb.p = pb.p_critical() - gap;
    res = minimize_quotient(pb, pre.converged ? &pre.v : nullptr);
  } else {
    res = minimize_quotient(pb);
  }
  if (!res.converged) throw SolverError("solve_halfspace: no convergence");

  Eigen::VectorXd w = std::pow(res.mu, 1.0 / (pb.p - 2.0)) * res.v;
  Eigen::Index peak;
  const double wmax = w.cwiseAbs().maxCoeff(&peak);
  const double mu_scale = std::pow(wmax, -2.0 / (n - 2.0));
  const double k = std::pow(mu_scale, 1.0 - gap / (pb.p_critical() - 2.0));

  HalfspaceBubble bub;
  bub.mesh = dom.mesh;
  for (auto& node : bub.mesh.nodes) node /= k;
  bub.mesh.h /= k;
  bub.mesh.h_origin /= k;
  bub.mesh.gen_spec_valid = false;
  bub.u = std::pow(mu_scale, 0.5 * (n - 2.0)) * w;
  bub.mu_s = res.mu;
  // scale-invariant interpretation; equals mu^{p/(p-2)} by the Nehari identity
  bub.energy = gradient_energy(dom.mesh, w);
  bub.gap = gap;
  bub.scale_k = k;
  bub.scale_mu = mu_scale;

  // decay of the profile along the interior diagonal, outside the core
  const double d_peak = std::max(1.0, bub.mesh.nodes[peak].norm());
  const double r_lo = 2.2 * d_peak;
  const double r_hi = 0.47 * R / k;
  PointLocator loc(bub.mesh);
  std::vector<double> xs, ys;
  if (r_hi > 1.5 * r_lo) {
    for (int j = 0; j < 12; ++j) {
      const double r = r_lo * std::pow(r_hi / r_lo, j / 11.0);
      const double c = 1.0 / std::sqrt(2.0);
      double val = interpolate_or(loc, bub.u, Vec2(-r * c, r * c), 0.0);
      if (val > 0.0) {
        xs.push_back(r);
        ys.push_back(val);
      }
    }
  }
  bub.decay_exponent = loglog_slope(xs, ys);
  return bub;
}

MeridianMesh make_kelvin_mesh(int n, int samples) {
  // polar mesh of the half-disk |x + e1/2| < 1/2, r >= 0 about its center
  const Vec2 c(-0.5, 0.0);
  const int M = samples;
  const int n_rings = std::max(4, samples / 2);
  MeridianMesh mesh;
  mesh.n = n;
  mesh.weight_exponent = n - 2;
  mesh.nodes.push_back(c);
  mesh.node_tags.push_back(BoundaryTag::Interior);
  auto node_id = [&](int l, int j) { return 1 + l * (M + 1) + j; };
  for (int l = 0; l < n_rings; ++l) {
    const double rho = 0.5 * (l + 1) / n_rings;
    for (int j = 0; j <= M; ++j) {
      const double phi = kPi * j / M;
      Vec2 p = c + rho * Vec2(std::cos(phi), std::sin(phi));
      if (j == 0 || j == M) p.y() = 0.0;
      mesh.nodes.push_back(p);
      BoundaryTag tag = BoundaryTag::Interior;
      if (l == n_rings - 1)
        tag = BoundaryTag::Dirichlet;
      else if (j == 0 || j == M)
        tag = BoundaryTag::Axis;
      mesh.node_tags.push_back(tag);
    }
  }
  // the origin is the rim node at phi = 0
  mesh.origin_node = node_id(n_rings - 1, 0);
  mesh.nodes[mesh.origin_node] = Vec2(0.0, 0.0);
  mesh.node_tags[mesh.origin_node] = BoundaryTag::SingularVertex;

  auto push_cell = [&](int a, int b, int d) {
    const Vec2 &pa = mesh.nodes[a], &pb = mesh.nodes[b], &pd = mesh.nodes[d];
    const double det = (pb.x() - pa.x()) * (pd.y() - pa.y()) -
                       (pb.y() - pa.y()) * (pd.x() - pa.x());
    if (det < 0.0)
      mesh.cells.push_back({a, d, b});
    else
      mesh.cells.push_back({a, b, d});
  };
  for (int j = 0; j < M; ++j) push_cell(0, node_id(0, j), node_id(0, j + 1));
  for (int l = 0; l + 1 < n_rings; ++l) {
    for (int j = 0; j < M; ++j) {
      push_cell(node_id(l, j), node_id(l + 1, j), node_id(l + 1, j + 1));
      push_cell(node_id(l, j), node_id(l + 1, j + 1), node_id(l, j + 1));
    }
  }
  // boundary edges: rim and axis
  std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
  for (std::size_t cc = 0; cc < mesh.cells.size(); ++cc) {
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(mesh.cells[cc][k], mesh.cells[cc][(k + 1) % 3]);
      auto it = edge_count.find(key);
      if (it == edge_count.end())
        edge_count[key] = {1, static_cast<int>(cc)};
      else
        it->second.first++;
    }
  }
  for (const auto& [key, val] : edge_count) {
    if (val.first != 1) continue;
    auto [a, b] = key;
    const bool on_axis = std::abs(mesh.nodes[a].y()) < 1e-12 &&
                         std::abs(mesh.nodes[b].y()) < 1e-12;
    mesh.boundary_edges.push_back(
        {a, b, val.second,
         on_axis ? BoundaryTag::Axis : BoundaryTag::Dirichlet});
  }
  mesh.h = 0.0;
  mesh.h_origin = 0.0;
  for (std::size_t cc = 0; cc < mesh.cells.size(); ++cc) {
    for (int k = 0; k < 3; ++k) {
      const double len = (mesh.nodes[mesh.cells[cc][k]] -
                          mesh.nodes[mesh.cells[cc][(k + 1) % 3]]).norm();
      mesh.h = std::max(mesh.h, len);
      for (int j = 0; j < 3; ++j)
        if (mesh.cells[cc][j] == mesh.origin_node)
          mesh.h_origin = std::max(mesh.h_origin, len);
    }
  }
  mesh.check_invariants();
  return mesh;
}

KelvinImage kelvin_transform(const HalfspaceBubble& bubble, int samples) {
  // The image mesh is the exact inversion pushforward of the bubble mesh:
  // x = (y - e1)/|y - e1|^2 maps the meridian of the truncated half space
  // onto the meridian of D minus a small hole at 0 (the image of the
  // truncation sphere), which is capped by a fan where v = 0.  Nodal
  // values transform exactly, so no interpolation error enters.
  (void)samples;
  const MeridianMesh& src = bubble.mesh;
  const int n = src.n;
  KelvinImage img;
  img.s = src.s;
  img.extrapolated = false;

  MeridianMesh& m = img.mesh;
  m.n = n;
  m.s = src.s;
  m.weight_exponent = n - 2;
  m.nodes.resize(src.num_nodes());
  m.node_tags.resize(src.num_nodes());
  img.v = Eigen::VectorXd::Zero(src.num_nodes() + 1);
  double r_trunc = 0.0;
  for (std::size_t i = 0; i < src.num_nodes(); ++i)
    r_trunc = std::max(r_trunc, src.nodes[i].norm());
  for (std::size_t i = 0; i < src.num_nodes(); ++i) {
    const Vec2 d = src.nodes[i] - Vec2(1.0, 0.0);
    const double d2 = d.squaredNorm();
    Vec2 x = d / d2;
    if (std::abs(src.nodes[i].y()) < 1e-14) x.y() = 0.0;
    m.nodes[i] = x;
    m.node_tags[i] = src.node_tags[i] == BoundaryTag::SingularVertex
                         ? BoundaryTag::Dirichlet
                         : src.node_tags[i];
    img.v[i] = std::pow(d2, 0.5 * (n - 2.0)) * bubble.u[i];
  }
  auto push_cell = [&](int a, int b, int c) {
    const Vec2 &pa = m.nodes[a], &pb = m.nodes[b], &pc = m.nodes[c];
    const double det = (pb.x() - pa.x()) * (pc.y() - pa.y()) -
                       (pb.y() - pa.y()) * (pc.x() - pa.x());
    if (det < 0.0)
      m.cells.push_back({a, c, b});
    else
      m.cells.push_back({a, b, c});
  };
  for (const auto& t : src.cells) push_cell(t[0], t[1], t[2]);
  // cap the truncation hole with a fan from the new origin node
  const int origin = static_cast<int>(m.nodes.size());
  m.nodes.push_back(Vec2(0.0, 0.0));
  m.node_tags.push_back(BoundaryTag::SingularVertex);
  m.origin_node = origin;
  for (const auto& e : src.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    if (src.nodes[e.a].norm() < 0.9 * r_trunc ||
        src.nodes[e.b].norm() < 0.9 * r_trunc)
      continue;
    push_cell(origin, e.a, e.b);
  }
  // boundary edges by edge counting; axis vs rim by the r coordinate
  std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
  for (std::size_t cc = 0; cc < m.cells.size(); ++cc) {
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(m.cells[cc][k], m.cells[cc][(k + 1) % 3]);
      auto it = edge_count.find(key);
      if (it == edge_count.end())
        edge_count[key] = {1, static_cast<int>(cc)};
      else
        it->second.first++;
    }
  }
  for (const auto& [key, val] : edge_count) {
    if (val.first != 1) continue;
    auto [a, b] = key;
    const bool on_axis =
        std::abs(m.nodes[a].y()) < 1e-13 && std::abs(m.nodes[b].y()) < 1e-13;
    m.boundary_edges.push_back(
        {a, b, val.second, on_axis ? BoundaryTag::Axis : BoundaryTag::Dirichlet});
  }
  m.h = 0.0;
  m.h_origin = 0.0;
  for (std::size_t cc = 0; cc < m.cells.size(); ++cc) {
    for (int k = 0; k < 3; ++k) {
      const double len = (m.nodes[m.cells[cc][k]] -
                          m.nodes[m.cells[cc][(k + 1) % 3]]).norm();
      m.h = std::max(m.h, len);
      for (int j = 0; j < 3; ++j)
        if (m.cells[cc][j] == origin) m.h_origin = std::max(m.h_origin, len);
    }
  }
  m.check_invariants();
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (m.is_dirichlet(static_cast<int>(i))) img.v[i] = 0.0;

  // the image of the subcritical solution solves the transformed equation
  // Delta v = v^{p-1} / (|x|^{s+(n-2) gap} |x+e1|^s) exactly
  img.gap = bubble.gap;
  const double s = img.s;
  const double p = 2.0 * (n - s) / (n - 2.0) - img.gap;
  SingularQuadrature quad(
      img.mesh,
      {{Vec2(0.0, 0.0), s + (n - 2.0) * img.gap}, {Vec2(-1.0, 0.0), s}});
  WeightedOperator op = assemble(img.mesh, nullptr);
  Eigen::VectorXd g =
      op.restrict_free(op.full * img.v - nonlinear_rhs(img.mesh, quad, img.v, p));
  img.pde_residual = std::sqrt(std::max(0.0, g.dot(op.solve_free(g))));

  // fit of the linear bound near the singular point
  double cmax = 0.0;
  for (std::size_t i = 0; i < img.mesh.num_nodes(); ++i) {
    const double d = img.mesh.nodes[i].norm();
    if (d > 1e-12 && d < 0.1) cmax = std::max(cmax, img.v[i] / d);
  }
  img.linear_bound_c = cmax;

  auto [ok, hm] = hopf_check(img);
  img.hopf_min = hm;
  (void)ok;
  return img;
}

std::pair<bool, double> hopf_check(const KelvinImage& image, double tol) {
  const MeridianMesh& mesh = image.mesh;
  double hopf_min = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    const Vec2 mid = 0.5 * (mesh.nodes[e.a] + mesh.nodes[e.b]);
    if (mid.norm() < 3.0 * mesh.h) continue;
    if ((mid - Vec2(-1.0, 0.0)).norm() < 3.0 * mesh.h) continue;
    const Vec2 nu = mesh.edge_outward_normal(e);
    const Vec2 grad = cell_gradient(mesh, e.cell, image.v);
    hopf_min = std::min(hopf_min, -grad.dot(nu));
    any = true;
  }
  if (!any) return {false, 0.0};
  return {hopf_min > tol, hopf_min};
}

double reflection_symmetry_check(const KelvinImage& image) {
  // the ambient field induced by the meridian representation
  PointLocator loc(image.mesh);
  auto field = [&](const Eigen::Vector3d& z) {
    const Vec2 x(z[0], std::hypot(z[1], z[2]));
    return interpolate_or(loc, image.v, x, 0.0);
  };
  return reflection_symmetry_check(image, field);
}

double reflection_symmetry_check(
    const KelvinImage& image,
    const std::function<double(const Eigen::Vector3d&)>& field3d) {
  (void)image;
  double dev = 0.0;
  for (int i = 0; i < 24; ++i) {
    for (int j = 1; j < 8; ++j) {
      const double rho = 0.45 * j / 8.0;
      const double phi = kPi * (i + 0.5) / 24.0;
      const double x1 = -0.5 + rho * std::cos(phi);
      const double r = rho * std::sin(phi);
      for (int t = 0; t < 6; ++t) {
        const double theta = 2.0 * kPi * t / 6.0;
        Eigen::Vector3d z(x1, r * std::cos(theta), r * std::sin(theta));
        Eigen::Vector3d zr(z[0], z[1], -z[2]);
        dev = std::max(dev, std::abs(field3d(z) - field3d(zr)));
      }
    }
  }
  return dev;
}

double kelvin_roundtrip_error(const HalfspaceBubble& bubble,
                              const KelvinImage& image) {
  const int n = bubble.mesh.n;
  PointLocator uloc(bubble.mesh);
  PointLocator vloc(image.mesh);
  double err = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 1; j < 12; ++j) {
      const double rad = 0.5 + 2.5 * j / 12.0;
      const double phi = 0.5 * kPi * (i + 0.5) / 16.0;
      const Vec2 y(-rad * std::cos(phi), rad * std::sin(phi));
      const Vec2 ye = y - Vec2(1.0, 0.0);
      const double d2 = ye.squaredNorm();
      const Vec2 x = ye / d2;
      auto vv = interpolate(vloc, image.v, x);
      auto uu = interpolate(uloc, bubble.u, y);
      if (!vv || !uu) continue;
      const double u_rec = std::pow(d2, 0.5 * (2.0 - n)) * *vv;
      err = std::max(err, std::abs(u_rec - *uu));
    }
  }
  return err;
}

}  // namespace hslab
