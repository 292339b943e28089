#pragma once

#include <vector>

#include "hslab/discretize.hpp"
#include "hslab/geometry.hpp"
#include "hslab/halfspace.hpp"

namespace hslab {

// One concentration scale: mu from the peak amplitude, k the associated
// spatial scale, alpha the subcritical amplitude factor mu^{p_eps}.
struct BubbleScale {
  double mu = 0.0;
  double k = 0.0;
  double alpha_measured = 0.0;
  Vec2 center = Vec2::Zero();
  double score = 0.0;  // weighted-residual value that selected this scale
};

struct BubbleDecomposition {
  double p_eps = 0.0;
  std::vector<BubbleScale> scales;       // mu increasing
  Eigen::VectorXd weak_limit;            // harmonic extension near 0
  Eigen::VectorXd residual;              // u - weak_limit - installed bubbles
  double residual_sup = 0.0;             // weighted score after extraction
  bool cap_reached = false;
  double delta = 0.0;                    // extension radius used
  std::vector<MeridianMesh> profile_meshes;
  std::vector<Eigen::VectorXd> profiles;  // rescaled profiles per scale
};

// Greedy exhaustion of concentration scales.  The weak limit is the
// (Delta + a)-harmonic extension of u inside |x| < delta = 0.05 R; scales
// are installed at the argmax of |x|^{(n-2)/2}|w|^{1-p_eps/(2*-2)} while
// above threshold.  When a template bubble is supplied, its rescaled copy
// is subtracted after each install; otherwise the core region is masked.
BubbleDecomposition extract_scales(const MeridianMesh& mesh,
                                   const Eigen::VectorXd& u, double p_eps,
                                   const BoundaryChart& chart,
                                   const ScalarField& a = nullptr,
                                   const HalfspaceBubble* tpl = nullptr,
                                   double threshold = 1.0,
                                   double separation_floor = 4.0,
                                   int n_max = 4);

// Rescaled profile mu^{(n-2)/2} u(phi(k x)) on a flat reference half ball
// of radius R; throws ConfigError when R k exceeds the chart validity.
std::pair<MeridianMesh, Eigen::VectorXd> rescaled_profile(
    const MeridianMesh& mesh, const Eigen::VectorXd& u,
    const BubbleScale& scale, const BoundaryChart& chart, double R,
    int samples = 32);

// Pointwise envelope constants: C_co over nodes against
// sum_i mu^{n/2}|x|/(mu^2+|x|^2)^{n/2} + |x|, and C_c1 over cell
// gradients against sum_i mu^{n/2}(mu^2+|x|^2)^{-n/2} + 1.
std::pair<double, double> envelope_fit(const MeridianMesh& mesh,
                                       const Eigen::VectorXd& u,
                                       const std::vector<BubbleScale>& scales);

struct QuantizationReport {
  double total_energy = 0.0;
  double weak_energy = 0.0;
  std::vector<double> bubble_energies;
  double additivity_gap = 0.0;  // |total - weak - sum of bubbles| / total
  double quantum = 0.0;         // mu_s(half space)^{2*/(2*-2)}
  bool quantized = false;       // every bubble energy >= quantum - tol
  int count_bound = 0;          // energy bound on the admissible bubble count
};

QuantizationReport energy_quantization(const MeridianMesh& mesh,
                                       const Eigen::VectorXd& u,
                                       const BubbleDecomposition& dec,
                                       double mu_s_halfspace,
                                       double tol = 0.02);

}  // namespace hslab
