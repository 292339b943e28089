#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Axisymmetric domains with the singular point 0 on the boundary.
//
// All domains are surfaces of revolution about the x1-axis through 0,
// the axis being normal to the boundary at 0.  A point of the ambient
// R^n is represented in the meridian plane by (x1, r) with r = |x'|,
// and volume integrals carry the weight c_n r^{n-2}, where c_n is the
// area of the unit (n-2)-sphere.

namespace hslab {

using Vec2 = Eigen::Vector2d;

enum class DomainFamily {
  PerturbedHalfBall,   // half ball with boundary curvature kappa at 0
  Cone,                // Egnell cone of given aperture
  StarShapedHalfBall,  // kappa >= 0, star-shape predicate enforced
  CustomMeridian,      // user-supplied meridian graph near 0
};

struct DomainSpec {
  int n = 3;                  // ambient dimension, >= 3
  double s = 1.0;             // Hardy-Sobolev weight exponent, in (0,2)
  DomainFamily family = DomainFamily::PerturbedHalfBall;
  double kappa = 0.0;         // common principal curvature at 0 (1/length)
  double radius = 1.0;        // ambient half-ball radius
  int meridian_samples = 16;  // angular intervals of the meridian mesh
  double aperture = 0.0;      // cone aperture angle in (0,pi); cone only
  double h_min_rel = 1e-2;    // grading target: h_min = h_min_rel * h
  // CustomMeridian: boundary graph r -> phi0(r) and its second derivative
  // at 0; must satisfy phi0(0)=0, phi0'(0)=0.
  std::function<double(double)> custom_phi0;
  double custom_hessian_at_0 = 0.0;

  void validate() const;  // throws std::invalid_argument on bad input
};

// Meridian graph chart at 0: x1 = phi0(r).  The chart map
// (x1, y) -> (x1 + phi0(|y|), y) sends {x1<0} into the domain and
// {x1=0} onto the boundary.
struct BoundaryChart {
  std::function<double(double)> phi0;
  double valid_radius = 0.0;
  double hessian_at_0 = 0.0;  // phi0''(0)

  // chart map in meridian coordinates: local (x1, r) -> (x1 + phi0(r), r)
  Vec2 map(const Vec2& local) const;
};

struct CurvatureData {
  std::vector<double> alphas;        // n-1 principal curvatures at 0
  double mean_curvature_trace = 0.0; // H(0) = sum of alphas
  Eigen::MatrixXd ii0;               // matrix of II_0 on the tangent plane

  double ii0_form(const Eigen::VectorXd& x) const;  // II_0(x,x)
};

enum class BoundaryTag : std::uint8_t {
  Interior = 0,
  Axis = 1,           // r = 0, natural boundary of the reduction
  Dirichlet = 2,      // physical boundary of Omega
  SingularVertex = 3, // the origin; Dirichlet as well
};

struct MeridianMesh {
  int n = 3;                       // ambient dimension
  double s = 1.0;                  // carried for convenience
  int weight_exponent = 1;         // n - 2
  std::vector<Vec2> nodes;         // (x1, r), r >= 0
  std::vector<std::array<int, 3>> cells;
  std::vector<BoundaryTag> node_tags;
  // boundary edges (a,b) with tag Axis or Dirichlet; oriented so the
  // adjacent cell lies on the left
  struct BEdge { int a, b, cell; BoundaryTag tag; };
  std::vector<BEdge> boundary_edges;
  double h = 0.0;                  // max cell diameter
  double h_origin = 0.0;           // diameter of cells at the origin
  int origin_node = -1;
  // generation record; refine() regenerates at higher resolution when set
  bool gen_spec_valid = false;
  DomainSpec gen_spec;

  double weight_constant() const;  // c_n = |S^{n-2}|
  double cell_area(int c) const;
  Vec2 cell_centroid(int c) const;
  // outward unit normal of a boundary edge (in the meridian plane)
  Vec2 edge_outward_normal(const BEdge& e) const;
  std::size_t num_nodes() const { return nodes.size(); }
  bool is_dirichlet(int node) const {
    return node_tags[node] == BoundaryTag::Dirichlet ||
           node_tags[node] == BoundaryTag::SingularVertex;
  }
  void check_invariants() const;   // throws std::runtime_error
};

struct Domain {
  MeridianMesh mesh;
  BoundaryChart chart;
  CurvatureData curvature;
};

Domain make_domain(const DomainSpec& spec);

// (star-shaped?, min over Dirichlet boundary quadrature points of (x,nu))
std::pair<bool, double> star_shape_check(const MeridianMesh& mesh,
                                         double tol = 1e-10);

// Red-green style refinement: h halves per level, boundary nodes
// re-projected to the exact meridian curve.
MeridianMesh refine(const MeridianMesh& mesh, const BoundaryChart& chart,
                    int levels);

// Line-oriented text format with deterministic node ordering.
void write_mesh(std::ostream& os, const MeridianMesh& mesh);
MeridianMesh read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const MeridianMesh& mesh);
MeridianMesh read_mesh_file(const std::string& path);

// Nodal field export alongside the mesh format (one value per node).
void write_field(std::ostream& os, const Eigen::VectorXd& u);
Eigen::VectorXd read_field(std::istream& is);

double sphere_area(int dim);  // area of the unit (dim)-sphere S^dim

}  // namespace hslab
