#include "hslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// quintic smoothstep, 1 on t<=1/2, 0 on t>=1
double cutoff(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  double x = 2.0 * (1.0 - t);  // in (0,1)
  return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

double sphere_area(int dim) {
  // area of the unit sphere S^dim in R^{dim+1}
  double d = static_cast<double>(dim) + 1.0;
  return 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
}

void DomainSpec::validate() const {
  if (n < 3) throw std::invalid_argument("DomainSpec: n must be >= 3");
  if (!(s > 0.0 && s < 2.0))
    throw std::invalid_argument("DomainSpec: s must lie in (0,2)");
  if (!(radius > 0.0))
    throw std::invalid_argument("DomainSpec: radius must be positive");
  if (meridian_samples < 4)
    throw std::invalid_argument("DomainSpec: meridian_samples must be >= 4");
  if (family == DomainFamily::Cone && !(aperture > 0.0 && aperture < kPi))
    throw std::invalid_argument("DomainSpec: cone aperture must lie in (0,pi)");
  if (family == DomainFamily::StarShapedHalfBall && kappa < 0.0)
    throw std::invalid_argument(
        "DomainSpec: star-shaped family requires kappa >= 0");
  if (family == DomainFamily::CustomMeridian && !custom_phi0)
    throw std::invalid_argument("DomainSpec: custom family needs custom_phi0");
  if (std::abs(kappa) * radius > 2.0)
    throw std::invalid_argument(
        "DomainSpec: |kappa|*radius too large, meridian would self-intersect");
}

Vec2 BoundaryChart::map(const Vec2& local) const {
  if (local.norm() >= valid_radius)
    throw std::domain_error("chart_map: point outside chart validity");
  return Vec2(local.x() + phi0(std::abs(local.y())), local.y());
}

double CurvatureData::ii0_form(const Eigen::VectorXd& x) const {
  if (ii0.size() == 0) return 0.0;
  return x.dot(ii0 * x);
}

double MeridianMesh::weight_constant() const { return sphere_area(n - 2); }

double MeridianMesh::cell_area(int c) const {
  const auto& t = cells[c];
  return signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
}

Vec2 MeridianMesh::cell_centroid(int c) const {
  const auto& t = cells[c];
  return (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]) / 3.0;
}

Vec2 MeridianMesh::edge_outward_normal(const BEdge& e) const {
  Vec2 d = nodes[e.b] - nodes[e.a];
  Vec2 nrm(d.y(), -d.x());  // right-hand normal; adjacent cell on the left
  nrm.normalize();
  // orient away from the adjacent cell centroid
  Vec2 mid = 0.5 * (nodes[e.a] + nodes[e.b]);
  if (nrm.dot(mid - cell_centroid(e.cell)) < 0.0) nrm = -nrm;
  return nrm;
}

void MeridianMesh::check_invariants() const {
  if (origin_node < 0 || node_tags[origin_node] != BoundaryTag::SingularVertex)
    throw std::runtime_error("mesh: missing singular-vertex origin node");
  if (nodes[origin_node].norm() > 1e-14)
    throw std::runtime_error("mesh: origin node not at 0");
  int n_origin = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].y() < -1e-14)
      throw std::runtime_error("mesh: node with r < 0");
    if (node_tags[i] == BoundaryTag::SingularVertex) ++n_origin;
  }
  if (n_origin != 1)
    throw std::runtime_error("mesh: exactly one singular vertex required");
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double a = cell_area(static_cast<int>(c));
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      Vec2 e = nodes[cells[c][k]] - nodes[cells[c][(k + 1) % 3]];
      d2 = std::max(d2, e.squaredNorm());
    }
    if (!(a > 1e-4 * d2))
      throw std::runtime_error("mesh: degenerate cell below quality floor");
  }
  for (const auto& e : boundary_edges) {
    if (e.tag == BoundaryTag::Axis) {
      if (std::abs(nodes[e.a].y()) > 1e-12 || std::abs(nodes[e.b].y()) > 1e-12)
        throw std::runtime_error("mesh: axis edge with r != 0");
    }
  }
}

namespace {

struct MeridianShape {
  double theta_max;                       // angular extent from the axis
  std::function<double(double)> phi0;     // boundary graph near 0
  double blend_length;                    // deformation decay length
  bool deform;                            // apply the phi0 deformation
};

MeridianMesh generate(const DomainSpec& spec, const MeridianShape& shape) {
  const int M = spec.meridian_samples;
  const double R = spec.radius;
  const double th = shape.theta_max;

  // log-graded radii: cell size proportional to distance from the origin,
  // matched to the angular width so that aspect ratios stay bounded
  const double q = 1.0 / (1.0 + th / static_cast<double>(M));
  const double h_outer = R * th / static_cast<double>(M);
  const double r_min = std::max(spec.h_min_rel * h_outer, 1e-12 * R);
  std::vector<double> radii;
  for (double r = R; r > r_min; r *= q) radii.push_back(r);
  std::sort(radii.begin(), radii.end());

  MeridianMesh mesh;
  mesh.n = spec.n;
  mesh.s = spec.s;
  mesh.weight_exponent = spec.n - 2;

  auto point = [&](double rho, double theta) {
    return Vec2(-rho * std::cos(theta), rho * std::sin(theta));
  };

  mesh.nodes.push_back(Vec2(0.0, 0.0));
  mesh.node_tags.push_back(BoundaryTag::SingularVertex);
  mesh.origin_node = 0;

  const int ring_size = M + 1;
  const int n_rings = static_cast<int>(radii.size());
  auto node_id = [&](int ring, int j) { return 1 + ring * ring_size + j; };
  for (int k = 0; k < n_rings; ++k) {
    for (int j = 0; j <= M; ++j) {
      double theta = th * static_cast<double>(j) / static_cast<double>(M);
      mesh.nodes.push_back(point(radii[k], theta));
      BoundaryTag tag = BoundaryTag::Interior;
      if (k == n_rings - 1) tag = BoundaryTag::Dirichlet;       // outer arc
      else if (j == M) tag = BoundaryTag::Dirichlet;            // meridian curve
      else if (j == 0) tag = BoundaryTag::Axis;                 // r = 0
      mesh.node_tags.push_back(tag);
    }
  }

  auto push_cell = [&](int a, int b, int c) {
    if (signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]) < 0.0)
      std::swap(b, c);
    mesh.cells.push_back({a, b, c});
  };

  for (int j = 0; j < M; ++j) push_cell(0, node_id(0, j), node_id(0, j + 1));
  for (int k = 0; k + 1 < n_rings; ++k) {
    for (int j = 0; j < M; ++j) {
      int a = node_id(k, j), b = node_id(k + 1, j);
      int c = node_id(k + 1, j + 1), d = node_id(k, j + 1);
      push_cell(a, b, c);
      push_cell(a, c, d);
    }
  }

  if (shape.deform) {
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      Vec2& p = mesh.nodes[i];
      double w = std::clamp(1.0 + p.x() / shape.blend_length, 0.0, 1.0);
      p.x() += shape.phi0(p.y()) * w;
    }
  }

  // hull edges appear in exactly one cell
  std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.cells[c][k], b = mesh.cells[c][(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_count.find(key);
      if (it == edge_count.end())
        edge_count[key] = {1, static_cast<int>(c)};
      else
        it->second.first++;
    }
  }
  for (const auto& [key, val] : edge_count) {
    if (val.first != 1) continue;
    auto [a, b] = key;
    bool on_axis = std::abs(mesh.nodes[a].y()) < 1e-12 &&
                   std::abs(mesh.nodes[b].y()) < 1e-12;
    MeridianMesh::BEdge e;
    e.a = a;
    e.b = b;
    e.cell = val.second;
    e.tag = on_axis ? BoundaryTag::Axis : BoundaryTag::Dirichlet;
    mesh.boundary_edges.push_back(e);
  }

  mesh.h = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    for (int k = 0; k < 3; ++k) {
      Vec2 e = mesh.nodes[mesh.cells[c][k]] - mesh.nodes[mesh.cells[c][(k + 1) % 3]];
      double len = e.norm();
      mesh.h = std::max(mesh.h, len);
      bool at_origin = mesh.cells[c][0] == 0 || mesh.cells[c][1] == 0 ||
                       mesh.cells[c][2] == 0;
      if (at_origin) mesh.h_origin = std::max(mesh.h_origin, len);
    }
  }
  return mesh;
}

}  // namespace

Domain make_domain(const DomainSpec& spec) {
  spec.validate();
  Domain dom;
  const double R = spec.radius;

  MeridianShape shape;
  shape.theta_max = kPi / 2.0;
  shape.blend_length = 0.5 * R;
  shape.deform = true;

  BoundaryChart chart;
  switch (spec.family) {
    case DomainFamily::PerturbedHalfBall: {
      double rho0 = 0.5 * R;
      double kappa = spec.kappa;
      chart.phi0 = [kappa, rho0](double r) {
        return -0.5 * kappa * r * r * cutoff(r / rho0);
      };
      chart.valid_radius = rho0;
      chart.hessian_at_0 = -kappa;
      break;
    }
    case DomainFamily::StarShapedHalfBall: {
      // full quadratic graph: (x,nu) = kappa r^2 / 2 >= 0 along the curve
      double kappa = spec.kappa;
      chart.phi0 = [kappa](double r) { return -0.5 * kappa * r * r; };
      chart.valid_radius = 0.7 * R;
      chart.hessian_at_0 = -kappa;
      break;
    }
    case DomainFamily::Cone: {
      shape.theta_max = spec.aperture;
      shape.deform = false;  // the polar mesh is the exact cone
      double cot = std::cos(spec.aperture) / std::sin(spec.aperture);
      chart.phi0 = [cot](double r) { return -cot * r; };
      chart.valid_radius = 0.5 * R;
      chart.hessian_at_0 = 0.0;
      break;
    }
    case DomainFamily::CustomMeridian: {
      chart.phi0 = spec.custom_phi0;
      chart.valid_radius = 0.5 * R;
      chart.hessian_at_0 = spec.custom_hessian_at_0;
      break;
    }
  }
  shape.phi0 = chart.phi0;

  dom.mesh = generate(spec, shape);
  dom.mesh.gen_spec = spec;
  dom.mesh.gen_spec_valid = true;
  dom.chart = chart;

  CurvatureData curv;
  if (spec.family == DomainFamily::Cone) {
    // a cone has a vertex at 0: curvature data is undefined there and the
    // fields are left zeroed; Pohozaev-ratio predictions are not available
    curv.ii0 = Eigen::MatrixXd::Zero(spec.n - 1, spec.n - 1);
  } else {
    double alpha = -chart.hessian_at_0;
    curv.alphas.assign(spec.n - 1, alpha);
    curv.mean_curvature_trace = alpha * static_cast<double>(spec.n - 1);
    curv.ii0 = alpha * Eigen::MatrixXd::Identity(spec.n - 1, spec.n - 1);
  }
  dom.curvature = curv;

  try {
    dom.mesh.check_invariants();
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(
        std::string("make_domain: invalid curvature/radius combination: ") +
        e.what());
  }
  if (spec.family == DomainFamily::StarShapedHalfBall) {
    auto [ok, mn] = star_shape_check(dom.mesh);
    if (!ok)
      throw std::invalid_argument(
          "make_domain: star-shape predicate fails on the generated mesh");
  }
  return dom;
}

std::pair<bool, double> star_shape_check(const MeridianMesh& mesh, double tol) {
  // 2-point Gauss on every Dirichlet boundary edge
  const double g = 0.5 / std::sqrt(3.0);
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Dirichlet) continue;
    Vec2 nrm = mesh.edge_outward_normal(e);
    Vec2 mid = 0.5 * (mesh.nodes[e.a] + mesh.nodes[e.b]);
    Vec2 d = 0.5 * (mesh.nodes[e.b] - mesh.nodes[e.a]);
    for (double t : {-g, g}) {
      Vec2 p = mid + 2.0 * t * d;
      mn = std::min(mn, p.dot(nrm));
    }
  }
  return {mn >= -tol, mn};
}

MeridianMesh refine(const MeridianMesh& mesh, const BoundaryChart& chart,
                    int levels) {
  if (levels < 1) throw std::invalid_argument("refine: levels must be >= 1");
  if (mesh.gen_spec_valid) {
    DomainSpec spec = mesh.gen_spec;
    spec.meridian_samples <<= levels;
    return make_domain(spec).mesh;
  }
  // fallback: plain 1->4 bisection, Dirichlet midpoints projected to the
  // meridian graph where the chart is valid
  MeridianMesh cur = mesh;
  for (int l = 0; l < levels; ++l) {
    MeridianMesh next;
    next.n = cur.n;
    next.s = cur.s;
    next.weight_exponent = cur.weight_exponent;
    next.nodes = cur.nodes;
    next.node_tags = cur.node_tags;
    std::map<std::pair<int, int>, int> midpoint;
    std::map<std::pair<int, int>, BoundaryTag> bedge_tag;
    for (const auto& e : cur.boundary_edges)
      bedge_tag[std::minmax(e.a, e.b)] = e.tag;
    auto mid_id = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec2 m = 0.5 * (cur.nodes[a] + cur.nodes[b]);
      BoundaryTag tag = BoundaryTag::Interior;
      auto bt = bedge_tag.find(key);
      if (bt != bedge_tag.end()) {
        tag = bt->second;
        if (tag == BoundaryTag::Axis) m.y() = 0.0;
        if (tag == BoundaryTag::Dirichlet && m.norm() < chart.valid_radius &&
            std::abs(cur.nodes[a].x() - chart.phi0(cur.nodes[a].y())) < 1e-10 &&
            std::abs(cur.nodes[b].x() - chart.phi0(cur.nodes[b].y())) < 1e-10)
          m.x() = chart.phi0(m.y());
      }
      int id = static_cast<int>(next.nodes.size());
      next.nodes.push_back(m);
      next.node_tags.push_back(tag);
      midpoint[key] = id;
      return id;
    };
    for (std::size_t c = 0; c < cur.cells.size(); ++c) {
      int a = cur.cells[c][0], b = cur.cells[c][1], d = cur.cells[c][2];
      int ab = mid_id(a, b), bd = mid_id(b, d), da = mid_id(d, a);
      next.cells.push_back({a, ab, da});
      next.cells.push_back({ab, b, bd});
      next.cells.push_back({da, bd, d});
      next.cells.push_back({ab, bd, da});
    }
    // rebuild boundary edges
    std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
    for (std::size_t c = 0; c < next.cells.size(); ++c) {
      for (int k = 0; k < 3; ++k) {
        auto key = std::minmax(next.cells[c][k], next.cells[c][(k + 1) % 3]);
        auto it = edge_count.find(key);
        if (it == edge_count.end())
          edge_count[key] = {1, static_cast<int>(c)};
        else
          it->second.first++;
      }
    }
    for (const auto& [key, val] : edge_count) {
      if (val.first != 1) continue;
      auto [a, b] = key;
      bool on_axis = std::abs(next.nodes[a].y()) < 1e-12 &&
                     std::abs(next.nodes[b].y()) < 1e-12;
      next.boundary_edges.push_back(
          {a, b, val.second, on_axis ? BoundaryTag::Axis : BoundaryTag::Dirichlet});
    }
    next.origin_node = cur.origin_node;
    next.h = 0.0;
    next.h_origin = 0.0;
    for (std::size_t c = 0; c < next.cells.size(); ++c) {
      for (int k = 0; k < 3; ++k) {
        Vec2 e = next.nodes[next.cells[c][k]] -
                 next.nodes[next.cells[c][(k + 1) % 3]];
        double len = e.norm();
        next.h = std::max(next.h, len);
        bool at_origin = next.cells[c][0] == next.origin_node ||
                         next.cells[c][1] == next.origin_node ||
                         next.cells[c][2] == next.origin_node;
        if (at_origin) next.h_origin = std::max(next.h_origin, len);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

void write_mesh(std::ostream& os, const MeridianMesh& mesh) {
  os << "hslab-mesh 1\n";
  os << std::setprecision(17);
  os << mesh.n << " " << mesh.s << " " << mesh.weight_exponent << " "
     << mesh.h << " " << mesh.h_origin << " " << mesh.origin_node << "\n";
  os << "nodes " << mesh.nodes.size() << "\n";
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    os << mesh.nodes[i].x() << " " << mesh.nodes[i].y() << " "
       << static_cast<int>(mesh.node_tags[i]) << "\n";
  os << "cells " << mesh.cells.size() << "\n";
  for (const auto& c : mesh.cells)
    os << c[0] << " " << c[1] << " " << c[2] << "\n";
  os << "bedges " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges)
    os << e.a << " " << e.b << " " << e.cell << " " << static_cast<int>(e.tag)
       << "\n";
}

MeridianMesh read_mesh(std::istream& is) {
  std::string magic;
  int version;
  is >> magic >> version;
  if (magic != "hslab-mesh" || version != 1)
    throw std::runtime_error("read_mesh: bad header");
  MeridianMesh mesh;
  is >> mesh.n >> mesh.s >> mesh.weight_exponent >> mesh.h >> mesh.h_origin >>
      mesh.origin_node;
  std::string kw;
  std::size_t count;
  is >> kw >> count;
  if (kw != "nodes") throw std::runtime_error("read_mesh: expected nodes");
  mesh.nodes.resize(count);
  mesh.node_tags.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    int tag;
    is >> mesh.nodes[i].x() >> mesh.nodes[i].y() >> tag;
    mesh.node_tags[i] = static_cast<BoundaryTag>(tag);
  }
  is >> kw >> count;
  if (kw != "cells") throw std::runtime_error("read_mesh: expected cells");
  mesh.cells.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    is >> mesh.cells[i][0] >> mesh.cells[i][1] >> mesh.cells[i][2];
  is >> kw >> count;
  if (kw != "bedges") throw std::runtime_error("read_mesh: expected bedges");
  mesh.boundary_edges.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    int tag;
    auto& e = mesh.boundary_edges[i];
    is >> e.a >> e.b >> e.cell >> tag;
    e.tag = static_cast<BoundaryTag>(tag);
  }
  if (!is) throw std::runtime_error("read_mesh: truncated input");
  return mesh;
}

void write_mesh_file(const std::string& path, const MeridianMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_mesh(os, mesh);
}

MeridianMesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_mesh(is);
}

void write_field(std::ostream& os, const Eigen::VectorXd& u) {
  os << std::setprecision(17);
  os << "hslab-field 1\n" << u.size() << "\n";
  for (Eigen::Index i = 0; i < u.size(); ++i) os << u[i] << "\n";
}

Eigen::VectorXd read_field(std::istream& is) {
  std::string magic;
  int version;
  Eigen::Index size;
  is >> magic >> version >> size;
  if (magic != "hslab-field" || version != 1)
    throw std::runtime_error("read_field: bad header");
  Eigen::VectorXd u(size);
  for (Eigen::Index i = 0; i < size; ++i) is >> u[i];
  if (!is) throw std::runtime_error("read_field: truncated input");
  return u;
}

}  // namespace hslab
