#include "doctest.h"
#include "hslab/interpolate.hpp"

using namespace hslab;

TEST_SUITE("interpolate") {

TEST_CASE("linear fields are reproduced exactly") {
  DomainSpec spec;
  spec.meridian_samples = 12;
  Domain dom = make_domain(spec);
  PointLocator loc(dom.mesh);
  Eigen::VectorXd u(dom.mesh.num_nodes());
  for (std::size_t i = 0; i < dom.mesh.num_nodes(); ++i)
    u[i] = 2.0 * dom.mesh.nodes[i].x() - 3.0 * dom.mesh.nodes[i].y() + 0.5;

  for (Vec2 x : {Vec2(-0.3, 0.2), Vec2(-0.05, 0.01), Vec2(-0.6, 0.4)}) {
    auto v = interpolate(loc, u, x);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(2.0 * x.x() - 3.0 * x.y() + 0.5).epsilon(1e-12));
    auto g = interpolate_gradient(loc, u, x);
    REQUIRE(g.has_value());
    CHECK(g->x() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(g->y() == doctest::Approx(-3.0).epsilon(1e-10));
  }
}

TEST_CASE("points outside the mesh are reported") {
  DomainSpec spec;
  spec.meridian_samples = 12;
  Domain dom = make_domain(spec);
  PointLocator loc(dom.mesh);
  Eigen::VectorXd u = Eigen::VectorXd::Ones(dom.mesh.num_nodes());
  CHECK_FALSE(interpolate(loc, u, Vec2(0.5, 0.5)).has_value());
  CHECK(interpolate_or(loc, u, Vec2(-2.0, 0.0), -7.0) == -7.0);
  CHECK(interpolate_or(loc, u, Vec2(-0.2, 0.1), -7.0) == doctest::Approx(1.0));
}

TEST_CASE("nodes locate into adjacent cells") {
  DomainSpec spec;
  spec.meridian_samples = 8;
  Domain dom = make_domain(spec);
  PointLocator loc(dom.mesh);
  for (std::size_t i = 0; i < dom.mesh.num_nodes(); i += 7)
    CHECK(loc.locate(dom.mesh.nodes[i]) >= 0);
}

}  // TEST_SUITE
