#include "hslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Core>

#include "hslab/blowup.hpp"
#include "hslab/errors.hpp"
#include "hslab/greens.hpp"
#include "hslab/halfspace.hpp"
#include "hslab/pohozaev.hpp"
#include "hslab/report.hpp"
#include "hslab/solver.hpp"

namespace hslab {

namespace {

const char* family_name(DomainFamily f) {
  switch (f) {
    case DomainFamily::PerturbedHalfBall: return "half_ball";
    case DomainFamily::Cone: return "cone";
    case DomainFamily::StarShapedHalfBall: return "star";
    default: return "custom";
  }
}

DomainFamily family_of(const std::string& name) {
  if (name == "half_ball") return DomainFamily::PerturbedHalfBall;
  if (name == "cone") return DomainFamily::Cone;
  if (name == "star") return DomainFamily::StarShapedHalfBall;
  throw ConfigError("unknown geometry.family: " + name);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v))
    throw ConfigError("expected integer for " + key + ": " + value);
  return static_cast<int>(v);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

ScalarField constant_field(double c) {
  if (c == 0.0) return nullptr;
  return [c](const Vec2&) { return c; };
}

struct RunContext {
  const ExperimentConfig& cfg;
  RunLedger ledger;
  std::string hash;

  explicit RunContext(const ExperimentConfig& c)
      : cfg(c),
        ledger((std::filesystem::path(c.out_dir) / "ledger.jsonl").string()),
        hash(c.config_hash()) {}

  std::string out(const std::string& name) const {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  }
  void record(Json outputs) {
    outputs["experiment"] = cfg.experiment;
    ledger.append(hash, outputs);
  }
};

Domain build_domain(const ExperimentConfig& cfg) {
  try {
    cfg.domain.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return make_domain(cfg.domain);
}

double target_p(const ExperimentConfig& cfg, double p_critical, double gap) {
  const double p = cfg.solver_p > 0.0 ? cfg.solver_p : p_critical - gap;
  if (p < 2.0 || p > p_critical)
    throw ConfigError("target exponent out of [2, p_critical]");
  return p;
}

SubcriticalProblem make_problem(const ExperimentConfig& cfg,
                                const MeridianMesh& mesh, double p) {
  SubcriticalProblem prob;
  prob.mesh = &mesh;
  prob.s = cfg.domain.s;
  prob.p = p;
  prob.a = constant_field(cfg.solver_a);
  prob.tol = cfg.solver_tol;
  prob.max_iter = cfg.solver_max_iter;
  return prob;
}

void write_field_file(const std::string& path, const MeridianMesh& mesh,
                      const Eigen::VectorXd& u) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write_mesh(out, mesh);
  write_field(out, u);
}

void run_solve(RunContext& ctx) {
  Domain dom = build_domain(ctx.cfg);
  SubcriticalProblem prob = make_problem(
      ctx.cfg, dom.mesh,
      target_p(ctx.cfg, 2.0 * (dom.mesh.n - dom.mesh.s) / (dom.mesh.n - 2.0),
               ctx.cfg.solver_gap));
  ExtremalResult res = minimize_quotient(prob);
  if (!res.converged)
    throw SolverError("solve: quotient minimization did not converge");

  CsvTable csv({"p", "gap", "mu", "energy", "sup_norm", "residual"});
  const double sup = res.v.cwiseAbs().maxCoeff();
  csv.add_row({prob.p, prob.p_critical() - prob.p, res.mu, res.energy, sup,
               res.residual});
  csv.write(ctx.out("solve.csv"));
  write_field_file(ctx.out("solve_field.txt"), dom.mesh, res.v);

  ctx.record({{"p", prob.p},
              {"mu", res.mu},
              {"energy", res.energy},
              {"sup_norm", sup},
              {"residual", res.residual},
              {"positive", res.positive},
              {"iterations", res.iterations}});
}

void run_sweep(RunContext& ctx) {
  Domain dom = build_domain(ctx.cfg);
  SubcriticalProblem prob = make_problem(ctx.cfg, dom.mesh, 3.0);
  const std::vector<double> grid = default_p_grid(
      prob.p_critical(), ctx.cfg.sweep_gap_min, ctx.cfg.sweep_gap_max);
  ContinuationTrace trace =
      continue_to_critical(prob, grid, ctx.cfg.sup_flag_threshold);

  CsvTable csv({"p", "gap", "mu", "sup_norm", "energy", "converged",
                "blowup_flag"});
  PlotSeries mu_series{"mu", {}, {}}, sup_series{"sup_norm", {}, {}};
  Json rows = Json::array();
  for (const auto& rec : trace.records) {
    csv.add_row({rec.p, rec.p_eps, rec.mu, rec.sup_norm, rec.energy,
                 static_cast<double>(rec.converged),
                 static_cast<double>(rec.blowup_flag)});
    mu_series.x.push_back(rec.p_eps);
    mu_series.y.push_back(rec.mu);
    sup_series.x.push_back(rec.p_eps);
    sup_series.y.push_back(rec.sup_norm);
    rows.push_back({{"p", rec.p},
                    {"gap", rec.p_eps},
                    {"mu", rec.mu},
                    {"sup_norm", rec.sup_norm},
                    {"energy", rec.energy},
                    {"converged", rec.converged},
                    {"blowup_flag", rec.blowup_flag}});
  }
  csv.write(ctx.out("sweep.csv"));
  write_svg_plot(ctx.out("mu_vs_gap.svg"), "mu vs gap", {mu_series});
  write_svg_plot(ctx.out("sup_vs_gap.svg"), "sup-norm vs gap", {sup_series},
                 true);

  const auto& first = trace.records.front();
  const auto& last = trace.records.back();
  ctx.record({{"rows", rows},
              {"kappa", ctx.cfg.domain.kappa},
              {"family", family_name(ctx.cfg.domain.family)},
              {"mu_first", first.mu},
              {"mu_last", last.mu},
              {"sup_growth", last.sup_norm / std::max(first.sup_norm, 1e-300)},
              {"blowup_flag", last.blowup_flag}});
}

void run_pohozaev(RunContext& ctx) {
  Domain dom = build_domain(ctx.cfg);
  const double p_crit =
      2.0 * (dom.mesh.n - dom.mesh.s) / (dom.mesh.n - 2.0);
  const double p = target_p(ctx.cfg, p_crit, ctx.cfg.solver_gap);
  if (p <= 2.0)
    throw ConfigError("pohozaev: needs a nonlinear exponent p > 2");
  SubcriticalProblem prob = make_problem(ctx.cfg, dom.mesh, p);
  ExtremalResult res = minimize_quotient(prob);
  if (!res.converged)
    throw SolverError("pohozaev: quotient minimization did not converge");
  // unscaled positive solution of Delta w + a w = w^{p-1} / |x|^s
  const Eigen::VectorXd w =
      std::pow(res.mu, 1.0 / (p - 2.0)) * res.v;

  double R = 0.0;
  for (const auto& nd : dom.mesh.nodes) R = std::max(R, nd.norm());
  CsvTable csv({"region_radius", "lhs_volume", "rhs_boundary", "rhs_sphere",
                "defect"});
  Json rows = Json::array();
  for (double frac : {0.5, 1.0, 1.5}) {
    const double r = frac * ctx.cfg.pohozaev_region * R;
    PohozaevReport rep =
        pohozaev_defect(dom.mesh, w, constant_field(ctx.cfg.solver_a), p,
                        dom.mesh.s, r);
    csv.add_row({rep.region_radius, rep.lhs_volume, rep.rhs_boundary,
                 rep.rhs_sphere, rep.defect});
    rows.push_back({{"r", rep.region_radius},
                    {"lhs", rep.lhs_volume},
                    {"boundary", rep.rhs_boundary},
                    {"sphere", rep.rhs_sphere},
                    {"defect", rep.defect}});
  }
  csv.write(ctx.out("pohozaev.csv"));
  ctx.record({{"p", p}, {"mu", res.mu}, {"rows", rows}});
}

void run_blowup(RunContext& ctx) {
  HalfspaceBubble tpl = solve_halfspace(
      ctx.cfg.domain.s, ctx.cfg.domain.n, ctx.cfg.halfspace_radius,
      ctx.cfg.halfspace_samples, ctx.cfg.halfspace_gap);
  Domain dom = build_domain(ctx.cfg);
  const double p_crit =
      2.0 * (dom.mesh.n - dom.mesh.s) / (dom.mesh.n - 2.0);
  const double p_eps = ctx.cfg.sweep_gap_min;
  SubcriticalProblem prob = make_problem(ctx.cfg, dom.mesh, p_crit - p_eps);
  ExtremalResult res = minimize_quotient(prob);
  if (!res.converged)
    throw SolverError("blowup: quotient minimization did not converge");
  const Eigen::VectorXd w =
      std::pow(res.mu, 1.0 / (prob.p - 2.0)) * res.v;

  BubbleDecomposition dec = extract_scales(
      dom.mesh, w, p_eps, dom.chart, constant_field(ctx.cfg.solver_a), &tpl,
      ctx.cfg.blowup_threshold, 4.0, ctx.cfg.blowup_n_max);
  QuantizationReport quant =
      energy_quantization(dom.mesh, w, dec, tpl.mu_s);
  auto [c_co, c_c1] = envelope_fit(dom.mesh, w, dec.scales);

  CsvTable csv({"index", "mu", "k", "alpha", "center_x1", "center_r",
                "score", "profile_energy"});
  Json scales = Json::array();
  for (std::size_t i = 0; i < dec.scales.size(); ++i) {
    const auto& sc = dec.scales[i];
    const double e = i < quant.bubble_energies.size()
                         ? quant.bubble_energies[i]
                         : 0.0;
    csv.add_row({static_cast<double>(i), sc.mu, sc.k, sc.alpha_measured,
                 sc.center.x(), sc.center.y(), sc.score, e});
    scales.push_back({{"mu", sc.mu},
                      {"k", sc.k},
                      {"alpha", sc.alpha_measured},
                      {"center", {sc.center.x(), sc.center.y()}},
                      {"energy", e}});
    if (i < dec.profiles.size() && dec.profiles[i].size() > 0)
      write_field_file(
          ctx.out("profile_" + std::to_string(i) + ".txt"),
          dec.profile_meshes[i], dec.profiles[i]);
  }
  csv.write(ctx.out("blowup_scales.csv"));

  ctx.record({{"p_eps", p_eps},
              {"mu", res.mu},
              {"scales", scales},
              {"bubble_count", dec.scales.size()},
              {"residual_sup", dec.residual_sup},
              {"c_co", c_co},
              {"c_c1", c_c1},
              {"total_energy", quant.total_energy},
              {"weak_energy", quant.weak_energy},
              {"quantum", quant.quantum},
              {"quantized", quant.quantized},
              {"additivity_gap", quant.additivity_gap}});
}

void run_greens(RunContext& ctx) {
  Domain dom = build_domain(ctx.cfg);
  const ScalarField a = constant_field(ctx.cfg.greens_a);
  auto kernels =
      greens_solve(dom.mesh, a, default_poles(dom.mesh, ctx.cfg.greens_poles));
  GreenConstants est = estimate_constants(dom.mesh, kernels);
  double R = 0.0;
  for (const auto& nd : dom.mesh.nodes) R = std::max(R, nd.norm());
  BoundaryKernel bk =
      boundary_kernel(dom.mesh, a, spread_poles(dom.mesh, 0.25 * R));

  double repro = 0.0;
  for (const auto& ker : kernels)
    repro = std::max(repro, ker.reproduction_error);

  CsvTable csv({"estimate", "mesh_h", "fitted_C"});
  const double h = dom.mesh.h;
  csv.add_row({"kernel", format_number(h), format_number(est.c_kernel)});
  csv.add_row({"distance", format_number(h), format_number(est.c_distance)});
  csv.add_row({"gradient", format_number(h), format_number(est.c_gradient)});
  csv.add_row({"gradient_distance", format_number(h),
               format_number(est.c_gradient_distance)});
  csv.add_row({"boundary_upper", format_number(h), format_number(bk.c_upper)});
  csv.add_row({"boundary_lower", format_number(h), format_number(bk.c_lower)});
  csv.add_row({"rigidity_scale", format_number(h),
               format_number(bk.rigidity_scale)});
  csv.write(ctx.out("greens_constants.csv"));

  Json outputs = {{"c_kernel", est.c_kernel},
                  {"c_distance", est.c_distance},
                  {"c_gradient", est.c_gradient},
                  {"c_gradient_distance", est.c_gradient_distance},
                  {"reproduction_max", repro},
                  {"boundary_upper", bk.c_upper},
                  {"boundary_lower", bk.c_lower},
                  {"rigidity_scale", bk.rigidity_scale},
                  {"rigidity_residual", bk.rigidity_residual}};
  if (ctx.cfg.greens_a != 0.0) {
    auto terms = parametrix_terms(a, dom.mesh, 2);
    Json jt = Json::array();
    for (const auto& term : terms)
      jt.push_back({{"order", term.order},
                    {"bound_constant", term.bound_constant},
                    {"fitted_exponent", term.fitted_exponent}});
    outputs["parametrix"] = jt;
  }
  ctx.record(outputs);
}

void run_halfspace(RunContext& ctx) {
  HalfspaceBubble bub = solve_halfspace(
      ctx.cfg.domain.s, ctx.cfg.domain.n, ctx.cfg.halfspace_radius,
      ctx.cfg.halfspace_samples, ctx.cfg.halfspace_gap);
  KelvinImage img = kelvin_transform(bub);
  auto [hopf_ok, hopf_min] = hopf_check(img);
  const double roundtrip = kelvin_roundtrip_error(bub, img);

  write_field_file(ctx.out("bubble_field.txt"), bub.mesh, bub.u);
  write_field_file(ctx.out("kelvin_field.txt"), img.mesh, img.v);

  Json outputs = {{"mu_s", bub.mu_s},
                  {"energy", bub.energy},
                  {"decay_exponent", bub.decay_exponent},
                  {"gap", bub.gap},
                  {"pde_residual", img.pde_residual},
                  {"hopf_ok", hopf_ok},
                  {"hopf_min", hopf_min},
                  {"roundtrip_error", roundtrip}};
  std::ofstream js(ctx.out("halfspace.json"));
  js << outputs.dump(2) << "\n";
  ctx.record(outputs);
}

void run_report(RunContext& ctx) {
  if (ctx.cfg.report_ledgers.empty())
    throw ConfigError("report: needs at least one ledger path");
  CsvTable csv({"ledger", "experiment", "family", "kappa", "mu_first",
                "mu_last", "sup_growth", "bubble_count"});
  for (const auto& path : ctx.cfg.report_ledgers) {
    const std::vector<Json> records = RunLedger::read(path);
    const Json& outputs = records.back().at("outputs");
    auto num = [&](const char* key) {
      return outputs.contains(key) && outputs[key].is_number()
                 ? format_number(outputs[key].get<double>())
                 : std::string("");
    };
    csv.add_row({path, outputs.value("experiment", ""),
                 outputs.value("family", ""), num("kappa"), num("mu_first"),
                 num("mu_last"), num("sup_growth"), num("bubble_count")});
  }
  csv.write(ctx.out("report_summary.csv"));
  ctx.record({{"ledgers", ctx.cfg.report_ledgers}});
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["experiment"] = experiment;
  kv["geometry.n"] = format_number(domain.n);
  kv["geometry.s"] = format_number(domain.s);
  kv["geometry.family"] = family_name(domain.family);
  kv["geometry.kappa"] = format_number(domain.kappa);
  kv["geometry.radius"] = format_number(domain.radius);
  kv["geometry.samples"] = format_number(domain.meridian_samples);
  kv["geometry.aperture"] = format_number(domain.aperture);
  kv["geometry.h_min_rel"] = format_number(domain.h_min_rel);
  kv["solver.gap"] = format_number(solver_gap);
  kv["solver.p"] = format_number(solver_p);
  kv["solver.a"] = format_number(solver_a);
  kv["solver.tol"] = format_number(solver_tol);
  kv["solver.max_iter"] = format_number(solver_max_iter);
  kv["solver.sup_flag"] = format_number(sup_flag_threshold);
  kv["sweep.gap_min"] = format_number(sweep_gap_min);
  kv["sweep.gap_max"] = format_number(sweep_gap_max);
  kv["pohozaev.region"] = format_number(pohozaev_region);
  kv["blowup.threshold"] = format_number(blowup_threshold);
  kv["blowup.n_max"] = format_number(blowup_n_max);
  kv["halfspace.radius"] = format_number(halfspace_radius);
  kv["halfspace.samples"] = format_number(halfspace_samples);
  kv["halfspace.gap"] = format_number(halfspace_gap);
  kv["greens.a"] = format_number(greens_a);
  kv["greens.poles"] = format_number(greens_poles);
  kv["seed"] = format_number(static_cast<double>(seed));
  std::string ledgers;
  for (const auto& l : report_ledgers) ledgers += l + ";";
  kv["report.ledgers"] = ledgers;
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  return out.str();
}

std::string ExperimentConfig::config_hash() const {
  return hash_hex(canonical());
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "experiment") cfg.experiment = value;
  else if (key == "geometry.n") cfg.domain.n = parse_int(key, value);
  else if (key == "geometry.s") cfg.domain.s = parse_double(key, value);
  else if (key == "geometry.family") cfg.domain.family = family_of(value);
  else if (key == "geometry.kappa") cfg.domain.kappa = parse_double(key, value);
  else if (key == "geometry.radius")
    cfg.domain.radius = parse_double(key, value);
  else if (key == "geometry.samples")
    cfg.domain.meridian_samples = parse_int(key, value);
  else if (key == "geometry.aperture")
    cfg.domain.aperture = parse_double(key, value);
  else if (key == "geometry.h_min_rel")
    cfg.domain.h_min_rel = parse_double(key, value);
  else if (key == "solver.gap") cfg.solver_gap = parse_double(key, value);
  else if (key == "solver.p") cfg.solver_p = parse_double(key, value);
  else if (key == "solver.a") cfg.solver_a = parse_double(key, value);
  else if (key == "solver.tol") cfg.solver_tol = parse_double(key, value);
  else if (key == "solver.max_iter")
    cfg.solver_max_iter = parse_int(key, value);
  else if (key == "solver.sup_flag")
    cfg.sup_flag_threshold = parse_double(key, value);
  else if (key == "sweep.gap_min") cfg.sweep_gap_min = parse_double(key, value);
  else if (key == "sweep.gap_max") cfg.sweep_gap_max = parse_double(key, value);
  else if (key == "pohozaev.region")
    cfg.pohozaev_region = parse_double(key, value);
  else if (key == "blowup.threshold")
    cfg.blowup_threshold = parse_double(key, value);
  else if (key == "blowup.n_max") cfg.blowup_n_max = parse_int(key, value);
  else if (key == "halfspace.radius")
    cfg.halfspace_radius = parse_double(key, value);
  else if (key == "halfspace.samples")
    cfg.halfspace_samples = parse_int(key, value);
  else if (key == "halfspace.gap")
    cfg.halfspace_gap = parse_double(key, value);
  else if (key == "greens.a") cfg.greens_a = parse_double(key, value);
  else if (key == "greens.poles") cfg.greens_poles = parse_int(key, value);
  else if (key == "report.ledgers") {
    cfg.report_ledgers.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!trim(item).empty()) cfg.report_ledgers.push_back(trim(item));
  } else if (key == "out") cfg.out_dir = value;
  else if (key == "seed") cfg.seed = parse_int(key, value);
  else if (key == "threads") cfg.threads = parse_int(key, value);
  else throw ConfigError("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  static const std::vector<std::string> known = {
      "solve", "sweep", "pohozaev", "blowup", "greens", "halfspace", "report"};
  if (std::find(known.begin(), known.end(), cfg.experiment) == known.end())
    throw ConfigError("unknown experiment: " + cfg.experiment);
  if (cfg.experiment != "report") {
    try {
      cfg.domain.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (cfg.solver_tol <= 0.0) throw ConfigError("solver.tol must be positive");
  if (cfg.solver_max_iter < 1)
    throw ConfigError("solver.max_iter must be positive");
  if (cfg.sweep_gap_min <= 0.0 || cfg.sweep_gap_max < cfg.sweep_gap_min)
    throw ConfigError("sweep gap range invalid");
  if (cfg.pohozaev_region <= 0.0 || cfg.pohozaev_region > 1.0)
    throw ConfigError("pohozaev.region must lie in (0, 1]");
  if (cfg.blowup_n_max < 1) throw ConfigError("blowup.n_max must be positive");
  if (cfg.halfspace_radius < 10.0)
    throw ConfigError("halfspace.radius must be at least 10");
  if (cfg.halfspace_gap <= 0.0 || cfg.halfspace_gap >= 1.0)
    throw ConfigError("halfspace.gap must lie in (0, 1)");
  if (cfg.greens_poles < 3) throw ConfigError("greens.poles must be >= 3");
  if (cfg.threads < 1) throw ConfigError("threads must be positive");
}

void run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  Eigen::setNbThreads(cfg.threads);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir);

  RunContext ctx(cfg);
  if (cfg.experiment == "solve") run_solve(ctx);
  else if (cfg.experiment == "sweep") run_sweep(ctx);
  else if (cfg.experiment == "pohozaev") run_pohozaev(ctx);
  else if (cfg.experiment == "blowup") run_blowup(ctx);
  else if (cfg.experiment == "greens") run_greens(ctx);
  else if (cfg.experiment == "halfspace") run_halfspace(ctx);
  else if (cfg.experiment == "report") run_report(ctx);
}

std::string config_schema() {
  return
      "experiment        solve | sweep | pohozaev | blowup | greens | "
      "halfspace | report\n"
      "geometry.n        ambient dimension (default 3)\n"
      "geometry.s        Hardy-Sobolev weight exponent in (0, 2)\n"
      "geometry.family   half_ball | cone | star\n"
      "geometry.kappa    boundary curvature at the singular point\n"
      "geometry.radius   domain radius\n"
      "geometry.samples  meridian mesh resolution\n"
      "geometry.aperture cone aperture angle (cone only)\n"
      "geometry.h_min_rel  grading floor relative to the outer mesh size\n"
      "solver.gap        2*(s) - p for single solves (default 0.1)\n"
      "solver.p          absolute exponent; overrides solver.gap when > 0\n"
      "solver.a          constant zeroth-order coefficient\n"
      "solver.tol        dual residual target\n"
      "solver.max_iter   iteration budget\n"
      "solver.sup_flag   sup-norm threshold flagged as blow-up in sweeps\n"
      "sweep.gap_min     smallest 2*(s) - p in the sweep\n"
      "sweep.gap_max     largest 2*(s) - p in the sweep\n"
      "pohozaev.region   test region radius relative to the domain\n"
      "blowup.threshold  detection score threshold\n"
      "blowup.n_max      bubble extraction cap\n"
      "halfspace.radius  truncation radius of the half-space solve (>= 10)\n"
      "halfspace.samples meridian resolution of the half-space solve\n"
      "halfspace.gap     subcritical gap of the half-space solve\n"
      "greens.a          constant coefficient of Delta + a\n"
      "greens.poles      number of estimate poles (>= 3)\n"
      "report.ledgers    semicolon-separated ledger paths\n"
      "out               output directory\n"
      "seed              recorded in the config hash\n"
      "threads           linear algebra threads\n";
}

}  // namespace hslab
