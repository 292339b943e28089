#include <cmath>

#include "doctest.h"
#include "hslab/pohozaev.hpp"

using namespace hslab;

namespace {

Domain flat_half_ball(int samples, double radius = 1.0) {
  DomainSpec spec;
  spec.meridian_samples = samples;
  spec.radius = radius;
  return make_domain(spec);
}

Eigen::VectorXd interpolant(const MeridianMesh& mesh,
                            const std::function<double(const Vec2&)>& f) {
  Eigen::VectorXd u(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) u[i] = f(mesh.nodes[i]);
  return u;
}

}  // namespace

TEST_SUITE("pohozaev") {

TEST_CASE("zero field gives a zero report") {
  Domain dom = flat_half_ball(12);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.mesh.num_nodes());
  PohozaevReport rep = pohozaev_defect(dom.mesh, zero, nullptr, 3.0, 1.0, 0.5);
  CHECK(rep.lhs_volume == 0.0);
  CHECK(rep.rhs_boundary == 0.0);
  CHECK(rep.rhs_sphere == 0.0);
  CHECK(rep.defect == 0.0);
  CHECK(boundary_gradient_integral(dom.mesh, zero, 2.0) == 0.0);
  CHECK_THROWS_AS(pohozaev_defect(dom.mesh, zero, nullptr, 3.0, 1.0, 1e-9),
                  ConfigError);
}

TEST_CASE("manufactured defect vanishes under refinement") {
  const double p = 3.0, s = 1.0, aval = 0.2;
  auto wfun = [](const Vec2& x) {
    return -0.5 * x.x() * (1.0 - x.squaredNorm());
  };
  auto source = [&](const Vec2& x) {
    const double w = wfun(x);
    return -5.0 * x.x() + aval * w -
           std::abs(w) * w / std::max(x.norm(), 1e-300);
  };
  double defects[2];
  int samples[2] = {16, 32};
  for (int k = 0; k < 2; ++k) {
    Domain dom = flat_half_ball(samples[k]);
    Eigen::VectorXd u = interpolant(dom.mesh, wfun);
    PohozaevReport rep = pohozaev_defect(
        dom.mesh, u, [&](const Vec2&) { return aval; }, p, s, 0.5, source);
    defects[k] = std::abs(rep.defect);
    // the flat part passes through 0, so its boundary term vanishes
    CHECK(std::abs(rep.rhs_boundary) <= 1e-13);
  }
  CHECK(defects[0] <= 2e-2);
  CHECK(defects[1] <= 0.6 * defects[0]);
}

TEST_CASE("boundary gradient integral against the sphere oracle") {
  Domain dom = flat_half_ball(48);
  Eigen::VectorXd u = interpolant(dom.mesh, [](const Vec2& x) {
    return x.x();
  });
  // (x,nu)|grad u|^2 = 1 on the unit sphere part, 0 on the flat part
  const double pi = 3.14159265358979323846;
  CHECK(boundary_gradient_integral(dom.mesh, u, 2.0) ==
        doctest::Approx(2.0 * pi).epsilon(0.01));
  CHECK(std::abs(boundary_gradient_integral(dom.mesh, u, 0.5)) <= 1e-13);
}

TEST_CASE("ratio prediction trace integrals and sign law") {
  auto make_dec = [&](int samples) {
    BubbleDecomposition dec;
    BubbleScale sc;
    sc.mu = 1e-2;
    sc.alpha_measured = std::pow(sc.mu, 0.02);
    sc.k = std::pow(sc.mu, 0.99);
    dec.scales.push_back(sc);
    Domain prof = flat_half_ball(samples, 6.0);
    dec.profile_meshes.push_back(prof.mesh);
    dec.profiles.push_back(interpolant(prof.mesh, [](const Vec2& x) {
      return x.x() * std::exp(-x.squaredNorm());
    }));
    return dec;
  };
  BubbleDecomposition dec = make_dec(32);

  DomainSpec curved;
  curved.kappa = -1.0;
  curved.radius = 0.5;
  Domain dom = make_domain(curved);
  RatioPrediction pred = ratio_prediction(dec, dom.curvature);
  const double pi = 3.14159265358979323846;
  // one-sided trace gradients converge at first order
  const double oracle = pi / 4.0;
  RatioPrediction fine = ratio_prediction(make_dec(64), dom.curvature);
  CHECK(std::abs(pred.trace_x2 - oracle) <= 0.15 * oracle);
  CHECK(std::abs(fine.trace_x2 - oracle) <=
        0.6 * std::abs(pred.trace_x2 - oracle));
  CHECK(pred.general_form < 0.0);
  CHECK(pred.general_form ==
        doctest::Approx(pred.mean_curvature_form).epsilon(1e-9));

  DomainSpec flat;
  flat.radius = 0.5;
  RatioPrediction zero = ratio_prediction(dec, make_domain(flat).curvature);
  CHECK(zero.general_form == 0.0);
  CHECK(zero.mean_curvature_form == 0.0);

  BubbleDecomposition empty;
  CHECK_THROWS_AS(ratio_prediction(empty, dom.curvature), ConfigError);
}

}  // TEST_SUITE
