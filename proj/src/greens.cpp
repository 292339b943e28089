#include "hslab/greens.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hslab/errors.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// max incident edge length per node
std::vector<double> node_sizes(const MeridianMesh& mesh) {
  std::vector<double> h(mesh.num_nodes(), 0.0);
  for (const auto& t : mesh.cells) {
    for (int k = 0; k < 3; ++k) {
      const double len =
          (mesh.nodes[t[k]] - mesh.nodes[t[(k + 1) % 3]]).norm();
      h[t[k]] = std::max(h[t[k]], len);
      h[t[(k + 1) % 3]] = std::max(h[t[(k + 1) % 3]], len);
    }
  }
  return h;
}

// boundary nodes where two boundary pieces meet at an angle or with
// different tags, plus the singular vertex
std::vector<int> corner_nodes(const MeridianMesh& mesh) {
  std::vector<std::vector<int>> incident(mesh.num_nodes());
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    incident[mesh.boundary_edges[e].a].push_back(static_cast<int>(e));
    incident[mesh.boundary_edges[e].b].push_back(static_cast<int>(e));
  }
  std::vector<int> corners;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.node_tags[i] == BoundaryTag::SingularVertex) {
      corners.push_back(static_cast<int>(i));
      continue;
    }
    if (incident[i].size() != 2) continue;
    const auto& e0 = mesh.boundary_edges[incident[i][0]];
    const auto& e1 = mesh.boundary_edges[incident[i][1]];
    if (e0.tag != e1.tag) {
      corners.push_back(static_cast<int>(i));
      continue;
    }
    const Vec2 t0 = (mesh.nodes[e0.b] - mesh.nodes[e0.a]).normalized();
    const Vec2 t1 = (mesh.nodes[e1.b] - mesh.nodes[e1.a]).normalized();
    if (std::abs(t0.dot(t1)) < std::cos(20.0 * M_PI / 180.0))
      corners.push_back(static_cast<int>(i));
  }
  return corners;
}

int nearest_free_node(const MeridianMesh& mesh, const Vec2& target,
                      bool axis_only) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.is_dirichlet(static_cast<int>(i))) continue;
    if (axis_only && mesh.nodes[i].y() > 1e-12) continue;
    const double d = (mesh.nodes[i] - target).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void push_unique(std::vector<int>& v, int i) {
  if (i >= 0 && std::find(v.begin(), v.end(), i) == v.end()) v.push_back(i);
}

struct TestFn {
  std::function<double(const Vec2&)> phi;
  std::function<double(const Vec2&)> lap;  // positive convention -Delta_e
};

// panel vanishing on the flat part {x1 = 0} and on the sphere |x| = R
std::vector<TestFn> reproduction_panel(double R, int n) {
  const double R2 = R * R;
  std::vector<TestFn> panel;
  panel.push_back(
      {[R2](const Vec2& x) { return -x.x() * (R2 - x.squaredNorm()); },
       [n](const Vec2& x) { return -(2.0 * n + 4.0) * x.x(); }});
  panel.push_back(
      {[R2](const Vec2& x) {
         const double v = R2 - x.squaredNorm();
         return -x.x() * v * v;
       },
       [R2, n](const Vec2& x) {
         const double r2 = x.squaredNorm();
         return -x.x() * ((4.0 * n + 8.0) * (R2 - r2) - 8.0 * r2);
       }});
  panel.push_back(
      {[R2](const Vec2& x) {
         return -x.x() * x.x() * x.x() * (R2 - x.squaredNorm());
       },
       [R2, n](const Vec2& x) {
         const double x1 = x.x();
         return 6.0 * R2 * x1 - (2.0 * n + 12.0) * x1 * x1 * x1 -
                6.0 * x1 * x.squaredNorm();
       }});
  return panel;
}

// least-squares slope of log|v| against log d
double loglog_fit(const std::vector<double>& d, const std::vector<double>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (v[i] <= 0.0) continue;
    const double lx = std::log(d[i]), ly = std::log(v[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  const double den = m * sxx - sx * sx;
  return den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
}

void fit_term(const MeridianMesh& mesh, ParametrixTerm& term) {
  std::vector<double> dist, mag;
  const int m = static_cast<int>(term.sample_nodes.size());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double d = (mesh.nodes[term.sample_nodes[i]] -
                        mesh.nodes[term.sample_nodes[j]]).norm();
      dist.push_back(d);
      mag.push_back(std::abs(term.values(i, j)));
    }
  }
  term.fitted_exponent = loglog_fit(dist, mag);
  term.bound_constant = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k)
    term.bound_constant =
        std::max(term.bound_constant,
                 mag[k] * std::pow(dist[k], mesh.n - 2.0 * term.order));
}

}  // namespace

double fundamental_kernel(double dist, int n) {
  if (dist <= 0.0)
    throw ConfigError("fundamental_kernel: coincident points");
  return 1.0 / ((n - 2.0) * sphere_area(n - 1) * std::pow(dist, n - 2.0));
}

double fundamental_kernel(const Vec2& x, const Vec2& y, int n) {
  return fundamental_kernel((x - y).norm(), n);
}

std::vector<ParametrixTerm> parametrix_terms(const ScalarField& a,
                                             const MeridianMesh& mesh,
                                             int depth,
                                             std::vector<int> sample_nodes) {
  if (depth < 1)
    throw ConfigError("parametrix_terms: depth must be positive");
  // deeper terms would need kernel values off the axis
  if (depth > 2)
    throw ConfigError("parametrix_terms: depth beyond axisymmetric sampling");

  double R = 0.0;
  for (const auto& p : mesh.nodes) R = std::max(R, p.norm());

  if (sample_nodes.empty()) {
    std::vector<int> axis;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      if (mesh.is_dirichlet(static_cast<int>(i))) continue;
      if (mesh.nodes[i].y() > 1e-12) continue;
      const double r = mesh.nodes[i].norm();
      if (r < 0.05 * R || r > 0.9 * R) continue;
      axis.push_back(static_cast<int>(i));
    }
    std::sort(axis.begin(), axis.end(), [&](int p, int q) {
      return mesh.nodes[p].norm() < mesh.nodes[q].norm();
    });
    double last = 0.0;
    for (int node : axis) {
      const double r = mesh.nodes[node].norm();
      if (r < 1.7 * last) continue;
      sample_nodes.push_back(node);
      last = r;
      if (sample_nodes.size() >= 8) break;
    }
  }
  const int m = static_cast<int>(sample_nodes.size());
  if (m < 2) throw ConfigError("parametrix_terms: too few sample nodes");

  const int n = mesh.n;
  std::vector<ParametrixTerm> terms;

  ParametrixTerm g1;
  g1.order = 1;
  g1.sample_nodes = sample_nodes;
  g1.values = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const Vec2& y = mesh.nodes[sample_nodes[j]];
      const double ay = a ? a(y) : 0.0;
      g1.values(i, j) =
          -ay * fundamental_kernel(mesh.nodes[sample_nodes[i]], y, n);
    }
  }
  fit_term(mesh, g1);
  terms.push_back(std::move(g1));

  if (depth >= 2) {
    ParametrixTerm g2;
    g2.order = 2;
    g2.sample_nodes = sample_nodes;
    g2.values = Eigen::MatrixXd::Zero(m, m);
    if (a) {
      const double coef = 1.0 / ((n - 2.0) * sphere_area(n - 1));
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
          const Vec2& xi = mesh.nodes[sample_nodes[i]];
          const Vec2& xj = mesh.nodes[sample_nodes[j]];
          SingularQuadrature quad(
              mesh, {{xi, n - 2.0}, {xj, n - 2.0}});
          // symmetric core int a(z) H(x_i,z) H(z,x_j) dz
          double core = 0.0;
          for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
            const CellRule& rule = quad.cell_rule_singular(static_cast<int>(c));
            for (Eigen::Index q = 0; q < rule.w.size(); ++q)
              core += rule.w[q] * a(rule.pts.row(q));
          }
          core *= coef * coef;
          g2.values(i, j) = a(xj) * core;
          g2.values(j, i) = a(xi) * core;
        }
      }
    }
    fit_term(mesh, g2);
    terms.push_back(std::move(g2));
  }
  return terms;
}

std::vector<int> default_poles(const MeridianMesh& mesh, int count) {
  double R = 0.0;
  for (const auto& p : mesh.nodes) R = std::max(R, p.norm());
  std::vector<int> poles;
  for (int i = 0; i < count; ++i) {
    const double frac =
        count > 1 ? 0.2 + 0.5 * i / (count - 1.0) : 0.45;
    push_unique(poles, nearest_free_node(mesh, Vec2(-frac * R, 0.0), true));
  }
  return poles;
}

std::vector<int> spread_poles(const MeridianMesh& mesh, double r_max,
                              int n_radii, int n_angles) {
  std::vector<int> poles;
  for (int j = 0; j < n_radii; ++j) {
    const double r =
        r_max * (n_radii > 1 ? 0.3 + 0.55 * j / (n_radii - 1.0) : 0.6);
    for (int k = 0; k < n_angles; ++k) {
      const double t =
          n_angles > 1 ? 0.15 + 1.2 * k / (n_angles - 1.0) : 0.7;
      const Vec2 target(-r * std::cos(t), r * std::sin(t));
      push_unique(poles, nearest_free_node(mesh, target, false));
    }
  }
  return poles;
}

std::vector<GreenKernel> greens_solve(const MeridianMesh& mesh,
                                      const ScalarField& a,
                                      const std::vector<int>& poles) {
  WeightedOperator op = assemble(mesh, a);
  if (!op.coercive)
    throw SolverError("greens_solve: operator is not coercive");

  double R = 0.0;
  for (const auto& p : mesh.nodes) R = std::max(R, p.norm());
  const std::vector<TestFn> panel = reproduction_panel(R, mesh.n);

  std::vector<CellRule> rules(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    rules[c] = plain_cell_rule(mesh, static_cast<int>(c));

  std::vector<GreenKernel> out;
  for (int pole : poles) {
    if (pole < 0 || pole >= static_cast<int>(mesh.num_nodes()) ||
        mesh.is_dirichlet(pole))
      throw ConfigError("greens_solve: pole must be an interior node");
    GreenKernel ker;
    ker.pole = pole;
    ker.x = mesh.nodes[pole];
    Eigen::VectorXd e = Eigen::VectorXd::Zero(mesh.num_nodes());
    e[pole] = 1.0;
    ker.g = op.solve(e);

    for (const auto& fn : panel) {
      double integral = 0.0;
      for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto& t = mesh.cells[c];
        const CellRule& rule = rules[c];
        for (Eigen::Index q = 0; q < rule.w.size(); ++q) {
          const Vec2 x = rule.pts.row(q);
          const double gq = rule.bary(q, 0) * ker.g[t[0]] +
                            rule.bary(q, 1) * ker.g[t[1]] +
                            rule.bary(q, 2) * ker.g[t[2]];
          double rhs = fn.lap(x);
          if (a) rhs += a(x) * fn.phi(x);
          integral += rule.w[q] * gq * rhs;
        }
      }
      double sup = 0.0;
      for (const auto& p : mesh.nodes) sup = std::max(sup, std::abs(fn.phi(p)));
      const double ref = std::max(std::abs(fn.phi(ker.x)), 0.01 * sup);
      ker.reproduction_error = std::max(
          ker.reproduction_error, std::abs(fn.phi(ker.x) - integral) / ref);
    }
    out.push_back(std::move(ker));
  }
  return out;
}

GreenKernel greens_solve(const MeridianMesh& mesh, const ScalarField& a,
                         int pole) {
  return greens_solve(mesh, a, std::vector<int>{pole})[0];
}

double dirichlet_distance(const MeridianMesh& mesh, const Vec2& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    best = std::min(best,
                    point_segment_distance(x, mesh.nodes[e.a], mesh.nodes[e.b]));
  }
  return best;
}

GreenConstants estimate_constants(const MeridianMesh& mesh,
                                  const std::vector<GreenKernel>& kernels,
                                  double min_dist) {
  if (kernels.size() < 3)
    throw ConfigError("estimate_constants: need at least 3 poles");
  const int n = mesh.n;
  const std::vector<double> hnode = node_sizes(mesh);
  const std::vector<int> corners = corner_nodes(mesh);

  auto near_corner = [&](const Vec2& p, double h) {
    for (int c : corners)
      if ((p - mesh.nodes[c]).norm() < 2.0 * std::max(h, hnode[c])) return true;
    return false;
  };

  std::vector<double> dnode(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    dnode[i] = dirichlet_distance(mesh, mesh.nodes[i]);

  GreenConstants est;
  for (const auto& ker : kernels) {
    const double hx = hnode[ker.pole];
    const double dx = dirichlet_distance(mesh, ker.x);
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      if (static_cast<int>(i) == ker.pole) continue;
      const double dist = (mesh.nodes[i] - ker.x).norm();
      if (dist < std::max(min_dist, 3.0 * std::max(hx, hnode[i]))) continue;
      if (near_corner(mesh.nodes[i], hnode[i])) continue;
      const double gv = std::abs(ker.g[i]);
      est.c_kernel = std::max(est.c_kernel, std::pow(dist, n - 2.0) * gv);
      if (dnode[i] > 1e-12)
        est.c_distance =
            std::max(est.c_distance, std::pow(dist, n - 1.0) * gv / dnode[i]);
    }
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
      const Vec2 mid = mesh.cell_centroid(static_cast<int>(c));
      double hc = 0.0;
      for (int k = 0; k < 3; ++k)
        hc = std::max(hc, hnode[mesh.cells[c][k]]);
      const double dist = (mid - ker.x).norm();
      if (dist < std::max(min_dist, 3.0 * std::max(hx, hc))) continue;
      if (near_corner(mid, hc)) continue;
      const double gv = cell_gradient(mesh, static_cast<int>(c), ker.g).norm();
      est.c_gradient = std::max(est.c_gradient, std::pow(dist, n - 1.0) * gv);
      if (dx > 1e-12)
        est.c_gradient_distance =
            std::max(est.c_gradient_distance, std::pow(dist, n * 1.0) * gv / dx);
    }
  }
  return est;
}

BoundaryKernel boundary_kernel(const MeridianMesh& mesh, const ScalarField& a,
                               const std::vector<int>& poles) {
  // probe node just inside the boundary along the inward normal at 0
  int z0 = -1;
  double d0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.is_dirichlet(static_cast<int>(i))) continue;
    if (mesh.nodes[i].y() > 1e-12) continue;
    const double r = mesh.nodes[i].norm();
    if (r > 1e-14 && r < d0) {
      d0 = r;
      z0 = static_cast<int>(i);
    }
  }
  if (z0 < 0)
    throw ConfigError("boundary_kernel: no interior axis node near 0");

  const std::vector<double> hnode = node_sizes(mesh);
  std::vector<int> accepted;
  for (int pole : poles) {
    if (pole < 0 || pole >= static_cast<int>(mesh.num_nodes())) continue;
    if (mesh.is_dirichlet(pole) || pole == z0) continue;
    const double r = mesh.nodes[pole].norm();
    if (r < std::max(3.0 * hnode[pole], 10.0 * d0)) continue;
    if (dirichlet_distance(mesh, mesh.nodes[pole]) < 1e-12) continue;
    accepted.push_back(pole);
  }
  if (accepted.size() < 2)
    throw ConfigError("boundary_kernel: no usable poles");

  const std::vector<GreenKernel> kernels = greens_solve(mesh, a, accepted);

  BoundaryKernel bk;
  bk.poles = accepted;
  bk.h.resize(static_cast<Eigen::Index>(accepted.size()));
  const int n = mesh.n;
  bk.c_lower = std::numeric_limits<double>::infinity();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const Vec2& x = kernels[i].x;
    bk.h[static_cast<Eigen::Index>(i)] = kernels[i].g[z0] / d0;
    const double q = std::pow(x.norm(), n * 1.0) *
                     bk.h[static_cast<Eigen::Index>(i)] /
                     dirichlet_distance(mesh, x);
    bk.c_upper = std::max(bk.c_upper, q);
    bk.c_lower = std::min(bk.c_lower, q);
    const double basis = std::abs(x.x()) / std::pow(x.norm(), n * 1.0);
    num += bk.h[static_cast<Eigen::Index>(i)] * basis;
    den += basis * basis;
  }
  bk.rigidity_scale = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const Vec2& x = kernels[i].x;
    const double model =
        bk.rigidity_scale * std::abs(x.x()) / std::pow(x.norm(), n * 1.0);
    if (model > 0.0)
      bk.rigidity_residual =
          std::max(bk.rigidity_residual,
                   std::abs(bk.h[static_cast<Eigen::Index>(i)] / model - 1.0));
  }
  return bk;
}

}  // namespace hslab
