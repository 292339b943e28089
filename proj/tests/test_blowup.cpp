#include <cmath>

#include "doctest.h"
#include "hslab/blowup.hpp"
#include "hslab/interpolate.hpp"
#include "hslab/solver.hpp"

using namespace hslab;

namespace {

const HalfspaceBubble& tpl() {
  static HalfspaceBubble bub = solve_halfspace(1.0, 3, 12.0, 32);
  return bub;
}

Domain plant_domain() {
  DomainSpec spec;
  spec.radius = 100.0;
  spec.meridian_samples = 64;
  spec.h_min_rel = 1e-3;
  return make_domain(spec);
}

// nodal field of a template copy at scale mu under gap p_eps
Eigen::VectorXd planted(const MeridianMesh& mesh, double mu, double p_eps) {
  const double k = std::pow(mu, 1.0 - 0.5 * p_eps);
  PointLocator loc(tpl().mesh);
  Eigen::VectorXd u(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    u[i] = std::pow(mu, -0.5) *
           interpolate_or(loc, tpl().u, mesh.nodes[i] / k, 0.0);
  return u;
}

Vec2 peak_node(const MeridianMesh& mesh, const Eigen::VectorXd& u) {
  Eigen::Index arg;
  u.cwiseAbs().maxCoeff(&arg);
  return mesh.nodes[arg];
}

}  // namespace

TEST_SUITE("blowup") {

TEST_CASE("planted single bubble is recovered") {
  const double p_eps = 0.02, mu = 1e-2;
  Domain dom = plant_domain();
  Eigen::VectorXd u = planted(dom.mesh, mu, p_eps);
  BubbleDecomposition dec =
      extract_scales(dom.mesh, u, p_eps, dom.chart, nullptr, &tpl());
  REQUIRE(dec.scales.size() == 1);
  const BubbleScale& sc = dec.scales[0];
  CHECK(sc.mu == doctest::Approx(mu).epsilon(0.05));
  CHECK(sc.k == std::pow(sc.mu, 1.0 - 0.5 * p_eps));  // exact recomputation
  CHECK(sc.alpha_measured == doctest::Approx(std::pow(sc.mu, p_eps)));
  CHECK(sc.alpha_measured > 0.0);
  CHECK(sc.alpha_measured <= 1.0);
  // the installed center tracks the planted peak
  const Vec2 peak = peak_node(dom.mesh, u);
  CHECK((sc.center - peak).norm() <= 0.5 * peak.norm());
  CHECK(dec.residual_sup <= 1.0);
  CHECK_FALSE(dec.cap_reached);
}

TEST_CASE("two separated scales come out ordered") {
  const double p_eps = 0.02;
  Domain dom = plant_domain();
  Eigen::VectorXd u = planted(dom.mesh, 1e-3, p_eps);
  u += planted(dom.mesh, 1e-1, p_eps);
  BubbleDecomposition dec =
      extract_scales(dom.mesh, u, p_eps, dom.chart, nullptr, &tpl());
  REQUIRE(dec.scales.size() == 2);
  CHECK(dec.scales[0].mu == doctest::Approx(1e-3).epsilon(0.05));
  CHECK(dec.scales[1].mu == doctest::Approx(1e-1).epsilon(0.05));
  CHECK(dec.scales[1].mu / dec.scales[0].mu >= 4.0);
  CHECK(dec.residual_sup <= 1.0);
}

TEST_CASE("bounded family yields no scales") {
  DomainSpec spec;
  spec.meridian_samples = 24;
  Domain dom = make_domain(spec);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.p = 3.0;
  ExtremalResult res = minimize_quotient(pb);
  REQUIRE(res.converged);
  Eigen::VectorXd w = std::pow(res.mu, 1.0 / (pb.p - 2.0)) * res.v;
  BubbleDecomposition dec = extract_scales(dom.mesh, w, 1.0, dom.chart);
  CHECK(dec.scales.empty());
  CHECK(dec.residual_sup <= 1.0);

  Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.mesh.num_nodes());
  BubbleDecomposition dz = extract_scales(dom.mesh, zero, 1.0, dom.chart);
  CHECK(dz.scales.empty());
  CHECK(dz.residual_sup == 0.0);
}

TEST_CASE("rescaled profile reproduces the template") {
  const double p_eps = 0.02, mu = 1e-2;
  Domain dom = plant_domain();
  Eigen::VectorXd u = planted(dom.mesh, mu, p_eps);
  BubbleDecomposition dec =
      extract_scales(dom.mesh, u, p_eps, dom.chart, nullptr, &tpl());
  REQUIRE(dec.scales.size() == 1);
  REQUIRE(dec.profiles.size() == 1);
  REQUIRE(dec.profiles[0].size() > 0);
  const MeridianMesh& pm = dec.profile_meshes[0];
  const Eigen::VectorXd& pf = dec.profiles[0];
  CHECK(pf.maxCoeff() == doctest::Approx(1.0).epsilon(0.05));
  PointLocator loc(tpl().mesh);
  double dev = 0.0;
  for (std::size_t i = 0; i < pm.num_nodes(); ++i)
    dev = std::max(dev, std::abs(pf[i] - interpolate_or(loc, tpl().u,
                                                        pm.nodes[i], 0.0)));
  CHECK(dev <= 0.05);

  BubbleScale too_big = dec.scales[0];
  too_big.k = 10.0;
  CHECK_THROWS_AS(rescaled_profile(dom.mesh, u, too_big, dom.chart, 40.0),
                  ConfigError);
  CHECK_THROWS_AS(extract_scales(dom.mesh, u, -0.1, dom.chart), ConfigError);
}

TEST_CASE("envelope constants") {
  DomainSpec spec;
  spec.meridian_samples = 24;
  Domain dom = make_domain(spec);
  Eigen::VectorXd dist(dom.mesh.num_nodes());
  for (std::size_t i = 0; i < dom.mesh.num_nodes(); ++i)
    dist[i] = dom.mesh.nodes[i].norm();
  auto [c_co, c_c1] = envelope_fit(dom.mesh, dist, {});
  CHECK(c_co <= 1.0 + 1e-9);
  CHECK(c_co >= 0.9);
  CHECK(c_c1 <= 1.01);  // P1 gradients of the |x| interpolant overshoot O(h)

  Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.mesh.num_nodes());
  auto [z_co, z_c1] = envelope_fit(dom.mesh, zero, {});
  CHECK(z_co == 0.0);
  CHECK(z_c1 == 0.0);
}

TEST_CASE("energy quantization of a planted bubble") {
  const double p_eps = 0.02, mu = 1e-2;
  Domain dom = plant_domain();
  Eigen::VectorXd u = planted(dom.mesh, mu, p_eps);
  BubbleDecomposition dec =
      extract_scales(dom.mesh, u, p_eps, dom.chart, nullptr, &tpl());
  REQUIRE(dec.scales.size() == 1);
  QuantizationReport rep = energy_quantization(dom.mesh, u, dec, tpl().mu_s);
  CHECK(rep.quantized);
  CHECK(rep.bubble_energies[0] ==
        doctest::Approx(rep.total_energy - rep.weak_energy).epsilon(0.10));
  CHECK(rep.additivity_gap <= 0.10);
  CHECK(rep.count_bound >= 1);
  CHECK(rep.count_bound <= 2);
}

}  // TEST_SUITE
