#include <cmath>

#include "doctest.h"
#include "hslab/solver.hpp"

using namespace hslab;

namespace {

Domain flat_half_ball(int samples, double radius = 1.0) {
  DomainSpec spec;
  spec.meridian_samples = samples;
  spec.radius = radius;
  return make_domain(spec);
}

// first positive zero of the spherical Bessel function j1
double bessel_j1_first_zero() {
  auto j1 = [](double x) { return std::sin(x) / (x * x) - std::cos(x) / x; };
  double lo = 3.5, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (j1(lo) * j1(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("dirichlet eigenvalue of the half ball matches the Bessel oracle") {
  const double lambda1 = std::pow(bessel_j1_first_zero(), 2);
  CHECK(lambda1 == doctest::Approx(20.1907).epsilon(1e-4));

  Domain dom = flat_half_ball(48);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.s = 0.0;
  pb.p = 2.0;
  ExtremalResult res = minimize_quotient(pb);
  CHECK(res.converged);
  CHECK(res.mu == doctest::Approx(lambda1).epsilon(0.02));
  CHECK(res.positive);
}

TEST_CASE("subcritical extremal invariants") {
  Domain dom = flat_half_ball(24);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.p = 3.5;
  ExtremalResult res = minimize_quotient(pb);
  REQUIRE(res.converged);
  SingularQuadrature quad(dom.mesh, pb.s);
  CHECK(hs_integral(dom.mesh, quad, res.v, pb.p) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.mu == doctest::Approx(res.energy).epsilon(1e-10));
  CHECK(res.positive);
  // Nehari identity for the rescaled solution
  Eigen::VectorXd w = std::pow(res.mu, 1.0 / (pb.p - 2.0)) * res.v;
  CHECK(gradient_energy(dom.mesh, w) ==
        doctest::Approx(hs_integral(dom.mesh, quad, w, pb.p)).epsilon(1e-6));
  // quotient of any admissible field sits above the infimum
  Eigen::VectorXd trial(dom.mesh.num_nodes());
  for (std::size_t i = 0; i < dom.mesh.num_nodes(); ++i) {
    const Vec2& x = dom.mesh.nodes[i];
    trial[i] = (1.0 - x.squaredNorm()) * (-x.x() + 0.05);
  }
  CHECK(hs_quotient(dom.mesh, quad, trial, pb.p) >= res.mu - 1e-9);
}

TEST_CASE("rescaled extremal already solves the Euler-Lagrange equation") {
  Domain dom = flat_half_ball(16);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.p = 3.0;
  ExtremalResult res = minimize_quotient(pb);
  REQUIRE(res.converged);
  Eigen::VectorXd w = std::pow(res.mu, 1.0 / (pb.p - 2.0)) * res.v;
  double rn = 0.0;
  Eigen::VectorXd w2 = solve_euler_lagrange(pb, w, nullptr, &rn);
  CHECK(rn <= pb.tol);
  CHECK((w2 - w).lpNorm<Eigen::Infinity>() <=
        1e-5 * w.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.mesh.num_nodes());
  CHECK_THROWS_AS(solve_euler_lagrange(pb, zero), ConfigError);
}

TEST_CASE("manufactured solution is recovered at second order") {
  const double p = 3.0, aval = 0.2;
  auto wfun = [](const Vec2& x) {
    return -0.5 * x.x() * (1.0 - x.squaredNorm());
  };
  auto source = [&](const Vec2& x) {
    const double w = wfun(x);
    const double nrm = x.norm();
    // Delta_e w = 5 x1, so the positive Laplacian gives -5 x1
    return -5.0 * x.x() + aval * w -
           std::abs(w) * w / std::max(nrm, 1e-300);
  };
  double errs[2];
  int samples[2] = {16, 32};
  for (int k = 0; k < 2; ++k) {
    Domain dom = flat_half_ball(samples[k]);
    SubcriticalProblem pb;
    pb.mesh = &dom.mesh;
    pb.p = p;
    pb.a = [&](const Vec2&) { return aval; };
    Eigen::VectorXd init(dom.mesh.num_nodes());
    for (std::size_t i = 0; i < dom.mesh.num_nodes(); ++i)
      init[i] = 0.9 * wfun(dom.mesh.nodes[i]);
    Eigen::VectorXd u = solve_euler_lagrange(pb, init, source);
    double err = 0.0;
    for (std::size_t i = 0; i < dom.mesh.num_nodes(); ++i) {
      if (dom.mesh.nodes[i].norm() < 0.1) continue;
      err = std::max(err, std::abs(u[i] - wfun(dom.mesh.nodes[i])));
    }
    errs[k] = err;
  }
  CHECK(errs[0] <= 2e-2);
  CHECK(errs[1] <= 0.45 * errs[0]);  // observed order well above 1
}

TEST_CASE("morse counts") {
  Domain dom = flat_half_ball(24);
  // trivial solution of a coercive operator: no nonpositive directions
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.mesh.num_nodes());
  LinearizationSpectrum s0 = morse_count(dom.mesh, zero, 3.0, 1.0, nullptr, 4);
  CHECK(s0.nonpositive_count == 0);
  CHECK(s0.eigenvalues[0] == doctest::Approx(std::pow(bessel_j1_first_zero(), 2)).epsilon(0.02));

  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.p = 3.5;
  ExtremalResult res = minimize_quotient(pb);
  REQUIRE(res.converged);
  Eigen::VectorXd w = std::pow(res.mu, 1.0 / (pb.p - 2.0)) * res.v;
  LinearizationSpectrum sg = morse_count(dom.mesh, w, pb.p, pb.s, nullptr, 4);
  CHECK(sg.nonpositive_count >= 1);
  // scaling direction: I_p''(w)(w,w) = (2-p) int |w|^p / |x|^s < 0
  SingularQuadrature quad(dom.mesh, pb.s);
  WeightedOperator op = assemble(dom.mesh, nullptr);
  const double ipp = w.dot(op.full * w) -
                     (pb.p - 1.0) * hs_integral(dom.mesh, quad, w, pb.p);
  CHECK(ipp < 0.0);
  CHECK(ipp == doctest::Approx((2.0 - pb.p) *
                               hs_integral(dom.mesh, quad, w, pb.p))
                   .epsilon(1e-6));
}

TEST_CASE("mountain pass level bounds the ground level") {
  Domain dom = flat_half_ball(16);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.p = 3.5;
  ExtremalResult res = minimize_quotient(pb);
  MountainPassResult mp = mountain_pass(pb);
  CHECK(mp.converged);
  CHECK(mp.residual <= pb.tol);
  const double ground_level = (0.5 - 1.0 / pb.p) *
                              std::pow(res.mu, pb.p / (pb.p - 2.0));
  CHECK(mp.level >= ground_level - 1e-6);
  LinearizationSpectrum sp = morse_count(dom.mesh, mp.u, pb.p, pb.s, nullptr, 3);
  CHECK(sp.nonpositive_count >= 1);
}

TEST_CASE("continuation traces are complete and deterministic") {
  Domain dom = flat_half_ball(16);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  std::vector<double> grid = default_p_grid(pb.p_critical(), 0.05);
  REQUIRE(grid.size() >= 3);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  CHECK(grid.back() == doctest::Approx(pb.p_critical() - 0.05));

  ContinuationTrace t1 = continue_to_critical(pb, grid);
  ContinuationTrace t2 = continue_to_critical(pb, grid);
  REQUIRE(t1.records.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(t1.records[i].converged);
    CHECK(t1.records[i].mu == t2.records[i].mu);
    CHECK(t1.records[i].sup_norm == t2.records[i].sup_norm);
  }
}

TEST_CASE("domain monotonicity of the best constant") {
  SubcriticalProblem pb;
  pb.p = 3.5;
  Domain small = flat_half_ball(20, 1.0);
  Domain big = flat_half_ball(20, 1.5);
  pb.mesh = &small.mesh;
  const double mu_small = minimize_quotient(pb).mu;
  pb.mesh = &big.mesh;
  const double mu_big = minimize_quotient(pb).mu;
  CHECK(mu_big <= mu_small + 1e-9);
}

TEST_CASE("critical quotient is invariant under dilation") {
  SubcriticalProblem pb;
  Domain d1 = flat_half_ball(16, 1.0);
  pb.mesh = &d1.mesh;
  pb.p = pb.p_critical();
  const double mu1 = minimize_quotient(pb).mu;
  Domain d2 = flat_half_ball(16, 2.0);
  pb.mesh = &d2.mesh;
  pb.p = pb.p_critical();
  const double mu2 = minimize_quotient(pb).mu;
  CHECK(mu2 == doctest::Approx(mu1).epsilon(0.02));
}

TEST_CASE("problem validation") {
  Domain dom = flat_half_ball(8);
  SubcriticalProblem pb;
  pb.mesh = &dom.mesh;
  pb.p = 1.5;
  CHECK_THROWS_AS(pb.validate(), ConfigError);
  pb.p = pb.p_critical() + 0.2;
  CHECK_THROWS_AS(pb.validate(), ConfigError);
}

}  // TEST_SUITE
