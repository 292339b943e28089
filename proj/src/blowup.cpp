#include "hslab/blowup.hpp"

#include <cmath>
#include <memory>

#include <Eigen/SparseCholesky>

#include "hslab/errors.hpp"
#include "hslab/interpolate.hpp"

namespace hslab {

namespace {

// (Delta + a)-harmonic extension of u inside |x| < delta
Eigen::VectorXd harmonic_extension(const MeridianMesh& mesh,
                                   const Eigen::VectorXd& u,
                                   const ScalarField& a, double delta) {
  WeightedOperator op = assemble(mesh, a);
  std::vector<int> inner_of_node(mesh.num_nodes(), -1);
  std::vector<int> node_of_inner;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.is_dirichlet(static_cast<int>(i))) continue;
    if (mesh.nodes[i].norm() >= delta) continue;
    inner_of_node[i] = static_cast<int>(node_of_inner.size());
    node_of_inner.push_back(static_cast<int>(i));
  }
  Eigen::VectorXd u0 = u;
  const int ni = static_cast<int>(node_of_inner.size());
  if (ni == 0) return u0;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
  for (int col = 0; col < op.full.outerSize(); ++col) {
    for (SpMat::InnerIterator it(op.full, col); it; ++it) {
      const int i = inner_of_node[it.row()];
      if (i < 0) continue;
      const int j = inner_of_node[col];
      if (j >= 0)
        trip.emplace_back(i, j, it.value());
      else
        rhs[i] -= it.value() * u[col];
    }
  }
  SpMat A(ni, ni);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SpMat> fac(A);
  if (fac.info() != Eigen::Success)
    throw SolverError("harmonic_extension: factorization failed");
  Eigen::VectorXd sol = fac.solve(rhs);
  for (int i = 0; i < ni; ++i) u0[node_of_inner[i]] = sol[i];
  return u0;
}

}  // namespace

BubbleDecomposition extract_scales(const MeridianMesh& mesh,
                                   const Eigen::VectorXd& u, double p_eps,
                                   const BoundaryChart& chart,
                                   const ScalarField& a,
                                   const HalfspaceBubble* tpl,
                                   double threshold, double separation_floor,
                                   int n_max) {
  const int n = mesh.n;
  const double two_star_gap = 2.0 * (2.0 - mesh.s) / (n - 2.0);  // 2*(s) - 2
  if (p_eps < 0.0 || p_eps >= two_star_gap)
    throw ConfigError("extract_scales: gap out of range");
  const double q = 1.0 - p_eps / two_star_gap;

  double radius = 0.0;
  for (const auto& node : mesh.nodes) radius = std::max(radius, node.norm());

  BubbleDecomposition dec;
  dec.p_eps = p_eps;
  dec.delta = 0.05 * radius;
  dec.weak_limit = harmonic_extension(mesh, u, a, dec.delta);
  Eigen::VectorXd w = u - dec.weak_limit;

  auto score_of = [&](std::size_t i) {
    return std::pow(mesh.nodes[i].norm(), 0.5 * (n - 2.0)) *
           std::pow(std::abs(w[i]), q);
  };
  auto max_score = [&](Eigen::Index* arg) {
    double best = 0.0;
    *arg = -1;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      const double sc = score_of(i);
      if (sc > best) {
        best = sc;
        *arg = static_cast<Eigen::Index>(i);
      }
    }
    return best;
  };

  std::unique_ptr<PointLocator> tpl_loc;
  if (tpl) tpl_loc = std::make_unique<PointLocator>(tpl->mesh);

  // node adjacency for refining a detection to the local amplitude peak
  std::vector<std::vector<int>> adj(mesh.num_nodes());
  for (const auto& t : mesh.cells) {
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].push_back(t[(k + 1) % 3]);
      adj[t[k]].push_back(t[(k + 2) % 3]);
    }
  }
  auto climb_to_peak = [&](Eigen::Index start) {
    int cur = static_cast<int>(start);
    for (int step = 0; step < 1000; ++step) {
      int best = cur;
      for (int nb : adj[cur])
        if (std::abs(w[nb]) > std::abs(w[best])) best = nb;
      if (best == cur) break;
      cur = best;
    }
    return cur;
  };

  while (true) {
    Eigen::Index arg;
    const double sc = max_score(&arg);
    dec.residual_sup = sc;
    if (sc <= threshold || arg < 0) break;
    if (static_cast<int>(dec.scales.size()) >= n_max) {
      dec.cap_reached = true;
      break;
    }
    // the score locates the bubble; the scale is set by the local peak
    arg = climb_to_peak(arg);
    BubbleScale scale;
    scale.mu = std::pow(std::abs(w[arg]), -2.0 / (n - 2.0));
    scale.k = std::pow(scale.mu, 1.0 - p_eps / two_star_gap);
    scale.alpha_measured = std::pow(scale.mu, p_eps);
    scale.center = mesh.nodes[arg];
    scale.score = sc;
    if (!dec.scales.empty()) {
      if (scale.mu <= dec.scales.back().mu ||
          scale.mu / dec.scales.back().mu < separation_floor)
        break;  // below the separation floor: treat as resolved
    }
    dec.scales.push_back(scale);
    if (tpl_loc) {
      const double amp = std::pow(scale.mu, -0.5 * (n - 2.0));
      for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        const Vec2 xi = mesh.nodes[i] / scale.k;
        w[i] -= amp * interpolate_or(*tpl_loc, tpl->u, xi, 0.0);
      }
    } else {
      const double mask_r = 30.0 * scale.k;
      for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
        if (mesh.nodes[i].norm() <= mask_r) w[i] = 0.0;
    }
  }
  dec.residual = w;

  // rescaled profiles where the chart reaches far enough past the core
  for (const auto& scale : dec.scales) {
    const double r_max =
        chart.valid_radius > 0.0 ? 0.8 * chart.valid_radius / scale.k : 0.0;
    const double R_prof = std::min(80.0, r_max);
    if (R_prof < 5.0) {
      dec.profile_meshes.emplace_back();
      dec.profiles.emplace_back();
      continue;
    }
    auto [pm, pf] = rescaled_profile(mesh, u, scale, chart, R_prof);
    dec.profile_meshes.push_back(std::move(pm));
    dec.profiles.push_back(std::move(pf));
  }
  return dec;
}

std::pair<MeridianMesh, Eigen::VectorXd> rescaled_profile(
    const MeridianMesh& mesh, const Eigen::VectorXd& u,
    const BubbleScale& scale, const BoundaryChart& chart, double R,
    int samples) {
  if (chart.valid_radius > 0.0 && R * scale.k > chart.valid_radius)
    throw ConfigError("rescaled_profile: scale too large for the chart");
  DomainSpec ref;
  ref.n = mesh.n;
  ref.s = mesh.s;
  ref.radius = R;
  ref.meridian_samples = samples;
  ref.h_min_rel = 1e-3;
  Domain dom = make_domain(ref);
  PointLocator loc(mesh);
  const double amp = std::pow(scale.mu, 0.5 * (mesh.n - 2.0));
  Eigen::VectorXd prof(dom.mesh.num_nodes());
  for (std::size_t i = 0; i < dom.mesh.num_nodes(); ++i) {
    const Vec2 y = chart.map(scale.k * dom.mesh.nodes[i]);
    prof[i] = amp * interpolate_or(loc, u, y, 0.0);
  }
  return {std::move(dom.mesh), std::move(prof)};
}

std::pair<double, double> envelope_fit(const MeridianMesh& mesh,
                                       const Eigen::VectorXd& u,
                                       const std::vector<BubbleScale>& scales) {
  const double n = mesh.n;
  double c_co = 0.0;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const double r = mesh.nodes[i].norm();
    if (r < 1e-14) continue;
    // model-bubble amplitude (mu/(mu^2+r^2))^{(n-2)/2}: peak mu^{-(n-2)/2},
    // tail mu^{(n-2)/2}/r^{n-2}, matching the limit-profile decay
    double env = r;
    for (const auto& s : scales)
      env += std::pow(s.mu / (s.mu * s.mu + r * r), 0.5 * (n - 2.0));
    c_co = std::max(c_co, std::abs(u[i]) / env);
  }
  double c_c1 = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const Vec2 mid = mesh.cell_centroid(static_cast<int>(c));
    const double r = mid.norm();
    double env = 1.0;
    for (const auto& s : scales)
      env += std::pow(s.mu, 0.5 * (n - 2.0)) /
             std::pow(s.mu * s.mu + r * r, 0.5 * (n - 1.0));
    const double g = cell_gradient(mesh, static_cast<int>(c), u).norm();
    c_c1 = std::max(c_c1, g / env);
  }
  return {c_co, c_c1};
}

QuantizationReport energy_quantization(const MeridianMesh& mesh,
                                       const Eigen::VectorXd& u,
                                       const BubbleDecomposition& dec,
                                       double mu_s_halfspace, double tol) {
  QuantizationReport rep;
  rep.total_energy = gradient_energy(mesh, u);
  rep.weak_energy = gradient_energy(mesh, dec.weak_limit);
  const double two_star = 2.0 * (mesh.n - mesh.s) / (mesh.n - 2.0);
  rep.quantum = std::pow(mu_s_halfspace, two_star / (two_star - 2.0));
  double sum = 0.0;
  rep.quantized = true;
  for (std::size_t i = 0; i < dec.scales.size(); ++i) {
    double e = 0.0;
    if (i < dec.profiles.size() && dec.profiles[i].size() > 0)
      e = gradient_energy(dec.profile_meshes[i], dec.profiles[i]);
    rep.bubble_energies.push_back(e);
    sum += e;
    if (e < rep.quantum * (1.0 - tol)) rep.quantized = false;
  }
  rep.additivity_gap =
      std::abs(rep.total_energy - rep.weak_energy - sum) /
      std::max(rep.total_energy, 1e-300);
  rep.count_bound = static_cast<int>(rep.total_energy / rep.quantum) + 1;
  return rep;
}

}  // namespace hslab
