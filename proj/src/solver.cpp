#include "hslab/solver.hpp"

#include <cmath>

#include <Eigen/SparseLU>

namespace hslab {

void SubcriticalProblem::validate() const {
  if (!mesh) throw ConfigError("SubcriticalProblem: no mesh");
  if (s != 0.0 && (s <= 0.0 || s >= 2.0))
    throw ConfigError("SubcriticalProblem: s must be 0 or in (0,2)");
  if (p < 2.0 || p > p_critical() + 1e-12)
    throw ConfigError("SubcriticalProblem: p must lie in [2, 2*(s)]");
}

namespace {

double dual_norm(const WeightedOperator& op, const Eigen::VectorXd& r_free) {
  return std::sqrt(std::max(0.0, r_free.dot(op.solve_free(r_free))));
}

Eigen::VectorXd normalize_hs(const MeridianMesh& mesh,
                             const SingularQuadrature& quad,
                             const Eigen::VectorXd& u, double p) {
  const double hs = hs_integral(mesh, quad, u, p);
  if (hs <= 0.0) throw SolverError("normalization: field vanishes");
  return u / std::pow(hs, 1.0 / p);
}

// positive torsion-type seed: K t = load(1)
Eigen::VectorXd seed_field(const MeridianMesh& mesh,
                           const WeightedOperator& op) {
  Eigen::VectorXd one = Eigen::VectorXd::Ones(mesh.num_nodes());
  return op.solve(load_vector(mesh, one));
}

// inverse power iteration for p = 2: K u = mu M_s u
ExtremalResult linear_eigen(const SubcriticalProblem& pb,
                            const WeightedOperator& op,
                            const SingularQuadrature& quad,
                            const Eigen::VectorXd* warm) {
  const MeridianMesh& mesh = *pb.mesh;
  SpMat Ms = pb.s == 0.0
                 ? mass_matrix(mesh)
                 : nonlinear_weight(mesh, quad,
                                    Eigen::VectorXd::Ones(mesh.num_nodes()),
                                    2.0);
  Eigen::VectorXd u = warm ? *warm : seed_field(mesh, op);
  u = normalize_hs(mesh, quad, u, 2.0);
  ExtremalResult res;
  double mu = 0.0;
  for (int it = 0; it < pb.max_iter; ++it) {
    Eigen::VectorXd next = op.solve(Ms * u);
    u = normalize_hs(mesh, quad, next, 2.0);
    mu = u.dot(op.full * u);
    Eigen::VectorXd r = op.restrict_free(op.full * u - mu * (Ms * u));
    res.residual = dual_norm(op, r);
    res.iterations = it + 1;
    if (res.residual <= pb.tol) break;
  }
  if (u.sum() < 0.0) u = -u;
  res.v = u;
  res.mu = mu;
  res.energy = gradient_energy(mesh, u);
  res.positive = u.minCoeff() >= -1e-10 * u.maxCoeff();
  res.converged = res.residual <= pb.tol;
  return res;
}

Eigen::VectorXd newton_euler_lagrange(const SubcriticalProblem& pb,
                                      const WeightedOperator& op,
                                      const SingularQuadrature& quad,
                                      Eigen::VectorXd w,
                                      const Eigen::VectorXd* src_load,
                                      double* out_residual, bool* ok) {
  const MeridianMesh& mesh = *pb.mesh;
  auto residual_vec = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd g = op.full * u - nonlinear_rhs(mesh, quad, u, pb.p);
    if (src_load) g -= *src_load;
    return op.restrict_free(g);
  };
  double rn = dual_norm(op, residual_vec(w));
  bool converged = rn <= pb.tol;
  for (int it = 0; it < pb.newton_max && !converged; ++it) {
    SpMat J_full = SpMat(op.full) - nonlinear_weight(mesh, quad, w, pb.p);
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < J_full.outerSize(); ++k) {
      for (SpMat::InnerIterator jt(J_full, k); jt; ++jt) {
        int fi = op.free_of_node[jt.row()], fj = op.free_of_node[jt.col()];
        if (fi >= 0 && fj >= 0) trip.emplace_back(fi, fj, jt.value());
      }
    }
    SpMat J(op.n_free(), op.n_free());
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SpMat> lu(J);
    if (lu.info() != Eigen::Success) break;
    Eigen::VectorXd dw = op.extend_zero(lu.solve(residual_vec(w)));
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-4) {
      Eigen::VectorXd cand = w - t * dw;
      double rn_new = dual_norm(op, residual_vec(cand));
      if (rn_new < rn) {
        w = cand;
        rn = rn_new;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    converged = rn <= pb.tol;
  }
  if (out_residual) *out_residual = rn;
  if (ok) *ok = converged;
  return w;
}

}  // namespace

ExtremalResult minimize_quotient(const SubcriticalProblem& pb,
                                 const Eigen::VectorXd* warm_start) {
  pb.validate();
  const MeridianMesh& mesh = *pb.mesh;
  SingularQuadrature quad(mesh, pb.s);
  WeightedOperator op = assemble(mesh, pb.a);
  if (!op.coercive)
    throw SolverError("minimize_quotient: operator is not coercive");
  if (pb.p <= 2.0 + 1e-12) return linear_eigen(pb, op, quad, warm_start);

  Eigen::VectorXd u = warm_start ? *warm_start : seed_field(mesh, op);
  u = u.cwiseMax(0.0);
  u = normalize_hs(mesh, quad, u, pb.p);

  ExtremalResult res;
  double J = u.dot(op.full * u);
  double t = 1.0;
  const double descent_tol = std::max(pb.tol, 1e-6 * J);
  for (int it = 0; it < pb.max_iter; ++it) {
    res.iterations = it + 1;
    Eigen::VectorXd F = nonlinear_rhs(mesh, quad, u, pb.p);
    Eigen::VectorXd r_free = op.restrict_free(op.full * u - J * F);
    Eigen::VectorXd d_free = op.solve_free(r_free);
    const double rd = r_free.dot(d_free);
    res.residual = std::sqrt(std::max(0.0, rd));
    if (res.residual <= descent_tol) break;
    Eigen::VectorXd d = op.extend_zero(d_free);
    t = std::min(4.0 * t, 1.0);
    bool accepted = false;
    while (t > pb.step_tol) {
      Eigen::VectorXd cand = (u - t * d).cwiseMax(0.0);
      const double hs = hs_integral(mesh, quad, cand, pb.p);
      if (hs > 0.0) {
        cand /= std::pow(hs, 1.0 / pb.p);
        const double Jc = cand.dot(op.full * cand);
        if (Jc <= J - 1e-4 * t * rd) {
          u = cand;
          J = Jc;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }

  // Newton polish on the unnormalized Euler-Lagrange equation
  Eigen::VectorXd w = std::pow(J, 1.0 / (pb.p - 2.0)) * u;
  bool ok = false;
  double rn = 0.0;
  w = newton_euler_lagrange(pb, op, quad, w, nullptr, &rn, &ok);
  if (ok) {
    u = normalize_hs(mesh, quad, w, pb.p);
    J = u.dot(op.full * u);
  }
  res.v = u;
  res.mu = J;
  res.energy = gradient_energy(mesh, u);
  res.positive = u.minCoeff() >= -1e-10 * u.maxCoeff();
  // report the residual of the polished iterate in its EL scaling
  if (ok) res.residual = rn;
  res.converged = ok || res.residual <= descent_tol;
  return res;
}

Eigen::VectorXd solve_euler_lagrange(const SubcriticalProblem& pb,
                                     const Eigen::VectorXd& init,
                                     const ScalarField& source,
                                     double* out_residual) {
  pb.validate();
  if (init.lpNorm<Eigen::Infinity>() == 0.0)
    throw ConfigError("solve_euler_lagrange: init must be nonzero");
  const MeridianMesh& mesh = *pb.mesh;
  SingularQuadrature quad(mesh, pb.s);
  WeightedOperator op = assemble(mesh, pb.a);
  if (!op.coercive)
    throw SolverError("solve_euler_lagrange: operator is not coercive");
  Eigen::VectorXd b;
  const Eigen::VectorXd* src = nullptr;
  if (source) {
    b = load_vector(mesh, source);
    src = &b;
  }
  bool ok = false;
  double rn = 0.0;
  Eigen::VectorXd w = init;
  for (int i = 0; i < w.size(); ++i)
    if (mesh.is_dirichlet(static_cast<int>(i))) w[i] = 0.0;
  w = newton_euler_lagrange(pb, op, quad, w, src, &rn, &ok);
  if (!ok) {
    // damped retry from a shrunk iterate
    Eigen::VectorXd w2 =
        newton_euler_lagrange(pb, op, quad, 0.5 * w, src, &rn, &ok);
    if (ok) w = w2;
  }
  if (out_residual) *out_residual = rn;
  if (!ok) throw SolverError("solve_euler_lagrange: Newton did not converge");
  return w;
}

ContinuationTrace continue_to_critical(SubcriticalProblem pb,
                                       const std::vector<double>& p_grid,
                                       double blowup_threshold,
                                       std::vector<ExtremalResult>* extremals) {
  if (p_grid.empty()) throw ConfigError("continue_to_critical: empty grid");
  for (std::size_t i = 1; i < p_grid.size(); ++i)
    if (p_grid[i] <= p_grid[i - 1])
      throw ConfigError("continue_to_critical: grid must increase");
  const double pc = pb.p_critical();
  ContinuationTrace trace;
  trace.blowup_threshold = blowup_threshold;
  Eigen::VectorXd warm;
  double sup_first = 0.0;
  for (double p : p_grid) {
    pb.p = p;
    ContinuationRecord rec;
    rec.p = p;
    rec.p_eps = pc - p;
    try {
      ExtremalResult er =
          minimize_quotient(pb, warm.size() ? &warm : nullptr);
      rec.mu = er.mu;
      rec.sup_norm = er.v.cwiseAbs().maxCoeff();
      rec.energy = er.energy;
      rec.converged = er.converged;
      if (er.converged) warm = er.v;
      if (sup_first == 0.0 && er.converged) sup_first = rec.sup_norm;
      rec.blowup_flag =
          sup_first > 0.0 && rec.sup_norm > blowup_threshold * sup_first;
      if (extremals) extremals->push_back(er);
    } catch (const SolverError&) {
      rec.converged = false;
      if (extremals) extremals->push_back(ExtremalResult{});
    }
    trace.records.push_back(rec);
  }
  return trace;
}

LinearizationSpectrum morse_count(const MeridianMesh& mesh,
                                  const Eigen::VectorXd& v, double p, double s,
                                  const ScalarField& a, int k) {
  SingularQuadrature quad(mesh, s);
  WeightedOperator op = assemble(mesh, a);
  SpMat W_full(v.size(), v.size());
  if (v.lpNorm<Eigen::Infinity>() > 0.0)
    W_full = nonlinear_weight(mesh, quad, v, p);
  SpMat M_full = mass_matrix(mesh);

  const int nf = op.n_free();
  k = std::min(k, nf);
  auto reduce = [&](const SpMat& A) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int kk = 0; kk < A.outerSize(); ++kk) {
      for (SpMat::InnerIterator it(A, kk); it; ++it) {
        int fi = op.free_of_node[it.row()], fj = op.free_of_node[it.col()];
        if (fi >= 0 && fj >= 0) trip.emplace_back(fi, fj, it.value());
      }
    }
    SpMat R(nf, nf);
    R.setFromTriplets(trip.begin(), trip.end());
    return R;
  };
  SpMat A = SpMat(op.reduced) - reduce(W_full);
  SpMat M = reduce(M_full);

  LinearizationSpectrum spec;
  if (nf <= 2500) {
    Eigen::MatrixXd Ad(A), Md(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Md);
    spec.eigenvalues = es.eigenvalues().head(k);
  } else {
    // shift-invert subspace iteration: sigma below the spectrum
    double wmax = 0.0;
    for (int i = 0; i < nf; ++i) {
      double wd = A.coeff(i, i), md = M.coeff(i, i);
      if (md > 0.0) wmax = std::max(wmax, std::max(0.0, -wd / md));
    }
    const double sigma = -2.0 * wmax - 1.0;
    SpMat S = A - sigma * M;
    Eigen::SimplicialLDLT<SpMat> fac(S);
    if (fac.info() != Eigen::Success)
      throw SolverError("morse_count: shift factorization failed");
    const int m = std::min(nf, k + 8);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nf, m);
    for (int j = 0; j < m; ++j) Q(j % nf, j) = 1.0;
    Eigen::VectorXd ritz;
    for (int it = 0; it < 80; ++it) {
      Eigen::MatrixXd Z(nf, m);
      for (int j = 0; j < m; ++j) Z.col(j) = fac.solve(M * Q.col(j));
      // M-orthonormalize
      for (int j = 0; j < m; ++j) {
        for (int l = 0; l < j; ++l)
          Z.col(j) -= Z.col(l).dot(M * Z.col(j)) * Z.col(l);
        double nn = std::sqrt(Z.col(j).dot(M * Z.col(j)));
        if (nn < 1e-300) nn = 1.0;
        Z.col(j) /= nn;
      }
      Eigen::MatrixXd Ar = Z.transpose() * (A * Z).eval();
      Eigen::MatrixXd Mr = Z.transpose() * (M * Z).eval();
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar, Mr);
      Q = Z * es.eigenvectors();
      ritz = es.eigenvalues();
    }
    spec.eigenvalues = ritz.head(k);
  }
  const double scale = std::abs(spec.eigenvalues[spec.eigenvalues.size() - 1]) + 1.0;
  spec.nonpositive_count = 0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
    if (spec.eigenvalues[i] <= 1e-10 * scale) ++spec.nonpositive_count;
  return spec;
}

MountainPassResult mountain_pass(const SubcriticalProblem& pb) {
  pb.validate();
  if (pb.p <= 2.0 + 1e-12)
    throw ConfigError("mountain_pass: needs a superlinear exponent");
  const MeridianMesh& mesh = *pb.mesh;
  SingularQuadrature quad(mesh, pb.s);
  WeightedOperator op = assemble(mesh, pb.a);
  if (!op.coercive) throw SolverError("mountain_pass: non-coercive operator");

  auto I = [&](const Eigen::VectorXd& u) {
    return 0.5 * u.dot(op.full * u) -
           hs_integral(mesh, quad, u, pb.p) / pb.p;
  };
  auto gradI = [&](const Eigen::VectorXd& u) {
    return op.restrict_free(op.full * u - nonlinear_rhs(mesh, quad, u, pb.p));
  };

  ExtremalResult ground = minimize_quotient(pb);
  Eigen::VectorXd w1 = std::pow(ground.mu, 1.0 / (pb.p - 2.0)) * ground.v;
  double T = 2.0;
  while (I(T * w1) >= 0.0 && T < 1e6) T *= 2.0;

  const int m = 20;
  std::vector<Eigen::VectorXd> path(m + 1);
  for (int j = 0; j <= m; ++j) path[j] = (T * j / m) * w1;

  int jmax = 1;
  for (int sweep = 0; sweep < 60; ++sweep) {
    jmax = 1;
    for (int j = 1; j < m; ++j)
      if (I(path[j]) > I(path[jmax])) jmax = j;
    Eigen::VectorXd g = gradI(path[jmax]);
    Eigen::VectorXd d = op.extend_zero(op.solve_free(g));
    double t = 1.0;
    const double I0 = I(path[jmax]);
    while (t > 1e-10 && I(path[jmax] - t * d) >= I0) t *= 0.5;
    if (t <= 1e-10) break;
    path[jmax] -= t * d;
  }

  MountainPassResult res;
  bool ok = false;
  res.u = newton_euler_lagrange(pb, op, quad, path[jmax], nullptr,
                                &res.residual, &ok);
  res.level = I(res.u);
  res.converged = ok;
  if (!ok) throw SolverError("mountain_pass: saddle polish did not converge");
  return res;
}

std::vector<double> default_p_grid(double p_critical, double gap_min,
                                   double gap_max) {
  std::vector<double> grid;
  for (double gap = gap_max; gap > gap_min * (1.0 + 1e-9); gap *= 0.5)
    grid.push_back(p_critical - gap);
  grid.push_back(p_critical - gap_min);
  return grid;
}

}  // namespace hslab
