#pragma once

#include <functional>

#include "hslab/geometry.hpp"
#include "hslab/solver.hpp"

namespace hslab {

// Rescaled positive solution of Delta u = u^{p-1}/|x|^s on a truncated
// half ball, normalized to sup = 1 at unit scale.
struct HalfspaceBubble {
  MeridianMesh mesh;        // template mesh, radius R / k
  Eigen::VectorXd u;
  double mu_s = 0.0;        // best-constant estimate mu_{s,p}
  double energy = 0.0;      // int |grad u|^2 of the template
  double decay_exponent = 0.0;
  double gap = 0.0;         // 2*(s) - p used in the solve
  double scale_k = 0.0;     // spatial rescaling applied
  double scale_mu = 0.0;    // amplitude scale of the raw solution
};

HalfspaceBubble solve_halfspace(double s, int n, double R,
                                int meridian_samples = 48, double gap = 0.02,
                                double h_min_rel = 1e-3);

// Kelvin image v(x) = |x|^{2-n} u(e1 + x/|x|^2) on D = B_{1/2}(-e1/2)
struct KelvinImage {
  MeridianMesh mesh;        // meridian half-disk of D
  Eigen::VectorXd v;
  double s = 1.0;
  double gap = 0.0;         // inherited subcritical gap of the source bubble
  // residual of the transformed equation at the inherited gap; the weight
  // exponent at 0 is s + (n-2) gap and the power is 2*(s) - gap
  double pde_residual = 0.0;
  double hopf_min = 0.0;    // min of -dv/dnu over accepted rim points
  bool extrapolated = false;
  double linear_bound_c = 0.0;  // fit of v <= C|x| over |x| < 0.1
};

// meridian mesh of the ball D (rim Dirichlet, origin the singular vertex)
MeridianMesh make_kelvin_mesh(int n, int samples);

KelvinImage kelvin_transform(const HalfspaceBubble& bubble, int samples = 48);

std::pair<bool, double> hopf_check(const KelvinImage& image, double tol = 1e-8);

// max asymmetry under reflection of a tangential coordinate
double reflection_symmetry_check(const KelvinImage& image);
double reflection_symmetry_check(
    const KelvinImage& image,
    const std::function<double(const Eigen::Vector3d&)>& field3d);

// max |u - Kelvin^{-1}(v)| over an overlap annulus of the template
double kelvin_roundtrip_error(const HalfspaceBubble& bubble,
                              const KelvinImage& image);

}  // namespace hslab
