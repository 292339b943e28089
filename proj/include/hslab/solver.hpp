#pragma once

#include <limits>
#include <vector>

#include "hslab/discretize.hpp"
#include "hslab/errors.hpp"
#include "hslab/geometry.hpp"

namespace hslab {

struct SubcriticalProblem {
  const MeridianMesh* mesh = nullptr;
  double s = 1.0;
  double p = 3.0;          // 2 <= p <= 2*(s); p = 2 is the linear eigenproblem
  ScalarField a;           // null means a == 0
  double tol = 1e-8;       // dual residual target
  double step_tol = 1e-12;
  int max_iter = 400;
  int newton_max = 40;

  double p_critical() const {
    return 2.0 * (mesh->n - s) / (mesh->n - 2.0);
  }
  void validate() const;
};

struct ExtremalResult {
  Eigen::VectorXd v;       // hs_integral(v, p) = 1
  double mu = 0.0;         // full quotient value, including the a-term
  double residual = 0.0;   // dual norm of the Euler-Lagrange residual
  int iterations = 0;
  bool positive = false;
  double energy = 0.0;     // int |grad v|^2 only
  bool converged = false;
};

struct ContinuationRecord {
  double p = 0.0;
  double p_eps = 0.0;      // 2*(s) - p
  double mu = 0.0;
  double sup_norm = 0.0;
  double energy = 0.0;
  bool converged = false;
  bool blowup_flag = false;
  // filled by the blow-up / Pohozaev analysis layers when run
  double pohozaev_defect = std::numeric_limits<double>::quiet_NaN();
  int bubble_count = -1;
  double mu_smallest = std::numeric_limits<double>::quiet_NaN();
};

struct ContinuationTrace {
  std::vector<ContinuationRecord> records;
  double blowup_threshold = 10.0;
};

struct LinearizationSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  int nonpositive_count = 0;
};

struct MountainPassResult {
  Eigen::VectorXd u;
  double level = 0.0;
  double residual = 0.0;
  bool converged = false;
};

ExtremalResult minimize_quotient(const SubcriticalProblem& problem,
                                 const Eigen::VectorXd* warm_start = nullptr);

// Newton on K u = F_p(u) + load(source); returns the converged field
Eigen::VectorXd solve_euler_lagrange(const SubcriticalProblem& problem,
                                     const Eigen::VectorXd& init,
                                     const ScalarField& source = nullptr,
                                     double* out_residual = nullptr);

ContinuationTrace continue_to_critical(
    SubcriticalProblem problem, const std::vector<double>& p_grid,
    double blowup_threshold = 10.0,
    std::vector<ExtremalResult>* extremals = nullptr);

LinearizationSpectrum morse_count(const MeridianMesh& mesh,
                                  const Eigen::VectorXd& v, double p, double s,
                                  const ScalarField& a, int k);

MountainPassResult mountain_pass(const SubcriticalProblem& problem);

// default geometric grid 2*(s) - p in {0.2, 0.1, ...} down to gap_min
std::vector<double> default_p_grid(double p_critical, double gap_min = 0.01,
                                   double gap_max = 0.2);

}  // namespace hslab
