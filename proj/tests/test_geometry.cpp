#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hslab/geometry.hpp"

using namespace hslab;

namespace {

DomainSpec half_ball(double kappa, int samples = 16) {
  DomainSpec spec;
  spec.family = DomainFamily::PerturbedHalfBall;
  spec.kappa = kappa;
  spec.meridian_samples = samples;
  return spec;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0 * M_PI));
  CHECK(sphere_area(2) == doctest::Approx(4.0 * M_PI));
}

TEST_CASE("curvature data for kappa=-1, n=3") {
  Domain dom = make_domain(half_ball(-1.0));
  CHECK(dom.curvature.mean_curvature_trace == doctest::Approx(-2.0));
  CHECK(dom.chart.hessian_at_0 == doctest::Approx(1.0));
  Eigen::VectorXd x(2);
  x << 0.3, -0.4;
  CHECK(dom.curvature.ii0_form(x) == doctest::Approx(-0.25));
  // II0 trace over an orthonormal frame equals H(0) exactly
  CHECK(dom.curvature.ii0.trace() == dom.curvature.mean_curvature_trace);
}

TEST_CASE("flat case kappa=0") {
  Domain dom = make_domain(half_ball(0.0));
  CHECK(dom.chart.phi0(0.1) == 0.0);
  CHECK(dom.curvature.ii0.norm() == 0.0);
  CHECK(dom.curvature.mean_curvature_trace == 0.0);
}

TEST_CASE("stored hessian matches finite differences of phi0") {
  for (double kappa : {-1.0, -0.3, 0.7}) {
    Domain dom = make_domain(half_ball(kappa));
    const double h = 1e-4;
    const double fd = 2.0 * dom.chart.phi0(h) / (h * h);
    CHECK(fd == doctest::Approx(dom.chart.hessian_at_0).epsilon(1e-6));
  }
}

TEST_CASE("chart map basics") {
  DomainSpec spec;
  spec.family = DomainFamily::CustomMeridian;
  spec.custom_phi0 = [](double r) { return 0.5 * r * r; };
  spec.custom_hessian_at_0 = 1.0;
  Domain dom = make_domain(spec);
  CHECK(dom.chart.map(Vec2(0, 0)).norm() == 0.0);
  CHECK(dom.chart.map(Vec2(-0.2, 0)) == Vec2(-0.2, 0));
  Vec2 y = dom.chart.map(Vec2(0.0, 0.1));
  CHECK(y.x() == doctest::Approx(0.005));
  CHECK(y.y() == doctest::Approx(0.1));
  CHECK_THROWS_AS(dom.chart.map(Vec2(10.0, 0.0)), std::domain_error);
}

TEST_CASE("star-shape predicate") {
  DomainSpec star;
  star.family = DomainFamily::StarShapedHalfBall;
  star.kappa = 0.5;
  Domain ds = make_domain(star);
  auto [ok_s, min_s] = star_shape_check(ds.mesh);
  CHECK(ok_s);
  CHECK(min_s >= -1e-10);

  Domain dn = make_domain(half_ball(-1.0));
  auto [ok_n, min_n] = star_shape_check(dn.mesh);
  CHECK_FALSE(ok_n);
  CHECK(min_n < 0.0);

  DomainSpec cone;
  cone.family = DomainFamily::Cone;
  cone.aperture = 0.8;
  Domain dc = make_domain(cone);
  auto [ok_c, min_c] = star_shape_check(dc.mesh);
  CHECK(ok_c);
  CHECK(min_c >= -1e-10);
  CHECK(min_c < 1e-10);  // rays through 0 give (x,nu)=0 on the lateral face
}

TEST_CASE("mesh invariants") {
  Domain dom = make_domain(half_ball(-0.5));
  const MeridianMesh& m = dom.mesh;
  CHECK_NOTHROW(m.check_invariants());
  int n_sing = 0;
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    CHECK(m.nodes[i].y() >= -1e-14);
    if (m.node_tags[i] == BoundaryTag::SingularVertex) ++n_sing;
  }
  CHECK(n_sing == 1);
  CHECK(m.nodes[m.origin_node].norm() == 0.0);
  // Dirichlet nodes inside the chart lie on the exact meridian graph
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    if (m.node_tags[i] != BoundaryTag::Dirichlet) continue;
    const Vec2& p = m.nodes[i];
    if (p.norm() < 0.4)
      CHECK(p.x() == doctest::Approx(dom.chart.phi0(p.y())).epsilon(1e-12));
  }
}

TEST_CASE("refinement") {
  Domain dom = make_domain(half_ball(-1.0));
  MeridianMesh fine = refine(dom.mesh, dom.chart, 1);
  CHECK(fine.h <= 0.55 * dom.mesh.h);
  double growth = static_cast<double>(fine.num_nodes()) /
                  static_cast<double>(dom.mesh.num_nodes());
  CHECK(growth > 3.0);
  CHECK(growth < 5.5);
  CHECK(fine.node_tags[fine.origin_node] == BoundaryTag::SingularVertex);
  CHECK_NOTHROW(fine.check_invariants());
}

TEST_CASE("bisection fallback refinement") {
  Domain dom = make_domain(half_ball(-1.0, 8));
  MeridianMesh m = dom.mesh;
  m.gen_spec_valid = false;
  MeridianMesh fine = refine(m, dom.chart, 1);
  CHECK(fine.h <= 0.55 * m.h);
  CHECK(fine.cells.size() == 4 * m.cells.size());
  CHECK_NOTHROW(fine.check_invariants());
}

TEST_CASE("mesh text roundtrip") {
  Domain dom = make_domain(half_ball(0.3, 8));
  std::stringstream ss;
  write_mesh(ss, dom.mesh);
  MeridianMesh back = read_mesh(ss);
  REQUIRE(back.num_nodes() == dom.mesh.num_nodes());
  REQUIRE(back.cells.size() == dom.mesh.cells.size());
  for (std::size_t i = 0; i < back.num_nodes(); ++i) {
    CHECK(back.nodes[i] == dom.mesh.nodes[i]);
    CHECK(back.node_tags[i] == dom.mesh.node_tags[i]);
  }
  CHECK(back.boundary_edges.size() == dom.mesh.boundary_edges.size());
}

TEST_CASE("field text roundtrip") {
  Eigen::VectorXd u(4);
  u << 1.0, -2.5, 1e-17, 3.25;
  std::stringstream ss;
  write_field(ss, u);
  Eigen::VectorXd back = read_field(ss);
  CHECK(back == u);
}

TEST_CASE("spec validation") {
  DomainSpec bad;
  bad.s = 2.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  DomainSpec cone;
  cone.family = DomainFamily::Cone;
  cone.aperture = 0.0;
  CHECK_THROWS_AS(cone.validate(), std::invalid_argument);
  DomainSpec star;
  star.family = DomainFamily::StarShapedHalfBall;
  star.kappa = -0.1;
  CHECK_THROWS_AS(star.validate(), std::invalid_argument);
}

}  // TEST_SUITE
