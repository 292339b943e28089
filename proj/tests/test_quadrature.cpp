#include <cmath>
#include <functional>

#include "doctest.h"
#include "hslab/geometry.hpp"
#include "hslab/quadrature.hpp"

using namespace hslab;

namespace {

// independent reference for origin-vertex integrals: ray parametrization
// with composite Gauss-Legendre panels graded toward t = 0
double reference_vertex_integral(const MeridianMesh& mesh, int c,
                                 const Vec2& v, double expo,
                                 const std::function<double(Vec2)>& f) {
  const auto& t = mesh.cells[c];
  int iv = -1;
  for (int k = 0; k < 3; ++k)
    if ((mesh.nodes[t[k]] - v).norm() < 1e-12) iv = k;
  REQUIRE(iv >= 0);
  const Vec2 e1 = mesh.nodes[t[(iv + 1) % 3]] - v;
  const Vec2 e2 = mesh.nodes[t[(iv + 2) % 3]] - v;
  const double det = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  const double cn = mesh.weight_constant();
  std::vector<double> gq, gw;
  gauss_legendre01(16, gq, gw);
  double total = 0.0;
  for (int jq = 0; jq < 16; ++jq) {
    const Vec2 P = (1.0 - gq[jq]) * e1 + gq[jq] * e2;
    double inner = 0.0;
    double b = 1.0;
    for (int panel = 0; panel < 220; ++panel) {
      const double a = b * 0.88;
      for (int i = 0; i < 16; ++i) {
        const double tt = a + (b - a) * gq[i];
        const Vec2 x = v + tt * P;
        inner += (b - a) * gw[i] * tt *
                 std::pow((x - v).norm(), -expo) *
                 std::pow(x.y(), mesh.weight_exponent) * f(x);
      }
      b = a;
    }
    total += cn * det * gw[jq] * inner;
  }
  return total;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss-legendre on [0,1]") {
  std::vector<double> p, w;
  gauss_legendre01(8, p, w);
  for (int k = 0; k <= 15; ++k) {
    double val = 0.0;
    for (int i = 0; i < 8; ++i) val += w[i] * std::pow(p[i], k);
    CHECK(val == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("gauss-jacobi weight t^beta on [0,1]") {
  for (double beta : {-0.5, 0.0, 0.7, 1.0}) {
    std::vector<double> p, w;
    gauss_jacobi01(10, beta, p, w);
    for (int k = 0; k <= 10; ++k) {
      double val = 0.0;
      for (int i = 0; i < 10; ++i) val += w[i] * std::pow(p[i], k);
      CHECK(val == doctest::Approx(1.0 / (beta + k + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("origin cells integrate |x|^{-s} times quadratics to 1e-8") {
  DomainSpec spec;
  spec.kappa = 0.0;
  spec.meridian_samples = 8;
  Domain dom = make_domain(spec);
  SingularQuadrature quad(dom.mesh, 1.0);

  std::vector<std::function<double(Vec2)>> polys = {
      [](Vec2) { return 1.0; },
      [](Vec2 x) { return x.x(); },
      [](Vec2 x) { return x.y(); },
      [](Vec2 x) { return x.x() * x.x(); },
      [](Vec2 x) { return x.x() * x.y(); },
      [](Vec2 x) { return x.y() * x.y(); },
  };

  int checked = 0;
  for (std::size_t c = 0; c < dom.mesh.cells.size() && checked < 2; ++c) {
    bool at_origin = false;
    for (int k = 0; k < 3; ++k)
      if (dom.mesh.cells[c][k] == dom.mesh.origin_node) at_origin = true;
    if (!at_origin) continue;
    ++checked;
    const CellRule& rule = quad.cell_rule_singular(static_cast<int>(c));
    for (const auto& f : polys) {
      double got = 0.0;
      for (Eigen::Index i = 0; i < rule.w.size(); ++i)
        got += rule.w[i] * f(Vec2(rule.pts.row(i)));
      const double ref = reference_vertex_integral(
          dom.mesh, static_cast<int>(c), Vec2(0, 0), 1.0, f);
      CHECK(got == doctest::Approx(ref).epsilon(1e-8));
    }
  }
  CHECK(checked == 2);
}

TEST_CASE("duffy rule at an off-axis vertex") {
  DomainSpec spec;
  spec.meridian_samples = 8;
  Domain dom = make_domain(spec);
  // pick a cell away from the axis and use one of its vertices
  int cell = -1;
  Vec2 v;
  for (std::size_t c = 0; c < dom.mesh.cells.size(); ++c) {
    Vec2 cen = dom.mesh.cell_centroid(static_cast<int>(c));
    if (cen.y() > 0.4 && cen.norm() > 0.5) {
      cell = static_cast<int>(c);
      v = dom.mesh.nodes[dom.mesh.cells[c][0]];
      break;
    }
  }
  REQUIRE(cell >= 0);
  auto f = [](Vec2 x) { return 1.0 + x.x() + x.y() * x.y(); };
  CellRule rule = duffy_vertex_rule(dom.mesh, cell, v, 1.0);
  double got = 0.0;
  for (Eigen::Index i = 0; i < rule.w.size(); ++i)
    got += rule.w[i] * f(Vec2(rule.pts.row(i)));
  const double ref = reference_vertex_integral(dom.mesh, cell, v, 1.0, f);
  CHECK(got == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("global singular integral of 1 over the half ball") {
  // int_{half B_1} |x|^{-1} dx = pi for n = 3
  DomainSpec spec;
  spec.meridian_samples = 64;
  Domain dom = make_domain(spec);
  SingularQuadrature quad(dom.mesh, 1.0);
  double total = 0.0;
  for (std::size_t c = 0; c < dom.mesh.cells.size(); ++c)
    total += quad.cell_rule_singular(static_cast<int>(c)).w.sum();
  CHECK(total == doctest::Approx(M_PI).epsilon(2e-3));
}

TEST_CASE("plain rule measures the half-ball volume") {
  DomainSpec spec;
  spec.meridian_samples = 64;
  Domain dom = make_domain(spec);
  double total = 0.0;
  for (std::size_t c = 0; c < dom.mesh.cells.size(); ++c)
    total += plain_cell_rule(dom.mesh, static_cast<int>(c)).w.sum();
  CHECK(total == doctest::Approx(2.0 * M_PI / 3.0).epsilon(2e-3));
}

}  // TEST_SUITE
