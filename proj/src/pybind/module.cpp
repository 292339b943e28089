#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hslab/blowup.hpp"
#include "hslab/errors.hpp"
#include "hslab/experiments.hpp"
#include "hslab/greens.hpp"
#include "hslab/halfspace.hpp"
#include "hslab/pohozaev.hpp"
#include "hslab/solver.hpp"

namespace py = pybind11;
using namespace hslab;

namespace {

ScalarField constant_field(double c) {
  if (c == 0.0) return nullptr;
  return [c](const Vec2&) { return c; };
}

DomainFamily family_of(const std::string& name) {
  if (name == "half_ball") return DomainFamily::PerturbedHalfBall;
  if (name == "cone") return DomainFamily::Cone;
  if (name == "star") return DomainFamily::StarShapedHalfBall;
  throw ConfigError("unknown domain family: " + name);
}

Eigen::MatrixXd mesh_nodes(const MeridianMesh& mesh) {
  Eigen::MatrixXd out(mesh.num_nodes(), 2);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    out.row(i) = mesh.nodes[i].transpose();
  return out;
}

Eigen::MatrixXi mesh_cells(const MeridianMesh& mesh) {
  Eigen::MatrixXi out(mesh.cells.size(), 3);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    for (int k = 0; k < 3; ++k) out(static_cast<Eigen::Index>(c), k) =
        mesh.cells[c][k];
  return out;
}

}  // namespace

PYBIND11_MODULE(_hslab, m) {
  m.doc() = "numerical laboratory for the boundary-singular Hardy-Sobolev "
            "problem";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<SolverError>(m, "SolverError");
  py::register_exception<InvariantError>(m, "InvariantError");

  py::class_<MeridianMesh>(m, "MeridianMesh")
      .def_readonly("n", &MeridianMesh::n)
      .def_readonly("s", &MeridianMesh::s)
      .def_readonly("h", &MeridianMesh::h)
      .def_property_readonly("nodes", &mesh_nodes)
      .def_property_readonly("cells", &mesh_cells)
      .def_property_readonly("num_nodes", &MeridianMesh::num_nodes)
      .def("is_dirichlet", &MeridianMesh::is_dirichlet);

  py::class_<CurvatureData>(m, "CurvatureData")
      .def_readonly("alphas", &CurvatureData::alphas)
      .def_readonly("mean_curvature_trace",
                    &CurvatureData::mean_curvature_trace);

  py::class_<Domain>(m, "Domain")
      .def_readonly("mesh", &Domain::mesh)
      .def_readonly("curvature", &Domain::curvature);

  m.def(
      "make_domain",
      [](int n, double s, const std::string& family, double kappa,
         double radius, int samples, double aperture, double h_min_rel) {
        DomainSpec spec;
        spec.n = n;
        spec.s = s;
        spec.family = family_of(family);
        spec.kappa = kappa;
        spec.radius = radius;
        spec.meridian_samples = samples;
        spec.aperture = aperture;
        spec.h_min_rel = h_min_rel;
        try {
          spec.validate();
        } catch (const std::exception& e) {
          throw ConfigError(e.what());
        }
        return make_domain(spec);
      },
      py::arg("n") = 3, py::arg("s") = 1.0, py::arg("family") = "half_ball",
      py::arg("kappa") = 0.0, py::arg("radius") = 1.0,
      py::arg("samples") = 16, py::arg("aperture") = 0.0,
      py::arg("h_min_rel") = 1e-2);

  py::class_<ExtremalResult>(m, "ExtremalResult")
      .def_readonly("v", &ExtremalResult::v)
      .def_readonly("mu", &ExtremalResult::mu)
      .def_readonly("energy", &ExtremalResult::energy)
      .def_readonly("residual", &ExtremalResult::residual)
      .def_readonly("iterations", &ExtremalResult::iterations)
      .def_readonly("positive", &ExtremalResult::positive)
      .def_readonly("converged", &ExtremalResult::converged);

  m.def(
      "solve_extremal",
      [](const Domain& dom, double p, double a, double tol, int max_iter) {
        SubcriticalProblem prob;
        prob.mesh = &dom.mesh;
        prob.s = dom.mesh.s;
        prob.p = p;
        prob.a = constant_field(a);
        prob.tol = tol;
        prob.max_iter = max_iter;
        return minimize_quotient(prob);
      },
      py::arg("domain"), py::arg("p"), py::arg("a") = 0.0,
      py::arg("tol") = 1e-8, py::arg("max_iter") = 400);

  py::class_<ContinuationRecord>(m, "ContinuationRecord")
      .def_readonly("p", &ContinuationRecord::p)
      .def_readonly("p_eps", &ContinuationRecord::p_eps)
      .def_readonly("mu", &ContinuationRecord::mu)
      .def_readonly("sup_norm", &ContinuationRecord::sup_norm)
      .def_readonly("energy", &ContinuationRecord::energy)
      .def_readonly("converged", &ContinuationRecord::converged)
      .def_readonly("blowup_flag", &ContinuationRecord::blowup_flag);

  m.def(
      "continue_to_critical",
      [](const Domain& dom, double gap_min, double gap_max, double a,
         double blowup_threshold) {
        SubcriticalProblem prob;
        prob.mesh = &dom.mesh;
        prob.s = dom.mesh.s;
        prob.a = constant_field(a);
        const auto grid =
            default_p_grid(prob.p_critical(), gap_min, gap_max);
        return continue_to_critical(prob, grid, blowup_threshold).records;
      },
      py::arg("domain"), py::arg("gap_min") = 0.01, py::arg("gap_max") = 0.2,
      py::arg("a") = 0.0, py::arg("blowup_threshold") = 10.0);

  py::class_<HalfspaceBubble>(m, "HalfspaceBubble")
      .def_readonly("mesh", &HalfspaceBubble::mesh)
      .def_readonly("u", &HalfspaceBubble::u)
      .def_readonly("mu_s", &HalfspaceBubble::mu_s)
      .def_readonly("energy", &HalfspaceBubble::energy)
      .def_readonly("decay_exponent", &HalfspaceBubble::decay_exponent)
      .def_readonly("gap", &HalfspaceBubble::gap);

  m.def("solve_halfspace", &solve_halfspace, py::arg("s") = 1.0,
        py::arg("n") = 3, py::arg("R") = 12.0, py::arg("samples") = 48,
        py::arg("gap") = 0.02, py::arg("h_min_rel") = 1e-3);

  py::class_<KelvinImage>(m, "KelvinImage")
      .def_readonly("mesh", &KelvinImage::mesh)
      .def_readonly("v", &KelvinImage::v)
      .def_readonly("pde_residual", &KelvinImage::pde_residual)
      .def_readonly("hopf_min", &KelvinImage::hopf_min);

  m.def("kelvin_transform", &kelvin_transform, py::arg("bubble"),
        py::arg("samples") = 48);
  m.def("hopf_check", &hopf_check, py::arg("image"), py::arg("tol") = 1e-8);
  m.def("kelvin_roundtrip_error", &kelvin_roundtrip_error);

  py::class_<PohozaevReport>(m, "PohozaevReport")
      .def_readonly("region_radius", &PohozaevReport::region_radius)
      .def_readonly("lhs_volume", &PohozaevReport::lhs_volume)
      .def_readonly("rhs_boundary", &PohozaevReport::rhs_boundary)
      .def_readonly("rhs_sphere", &PohozaevReport::rhs_sphere)
      .def_readonly("defect", &PohozaevReport::defect);

  m.def(
      "pohozaev_defect",
      [](const MeridianMesh& mesh, const Eigen::VectorXd& u, double a,
         double p, double s, double r) {
        return pohozaev_defect(mesh, u, constant_field(a), p, s, r);
      },
      py::arg("mesh"), py::arg("u"), py::arg("a"), py::arg("p"), py::arg("s"),
      py::arg("r"));

  py::class_<BubbleScale>(m, "BubbleScale")
      .def_readonly("mu", &BubbleScale::mu)
      .def_readonly("k", &BubbleScale::k)
      .def_readonly("alpha_measured", &BubbleScale::alpha_measured)
      .def_readonly("score", &BubbleScale::score)
      .def_property_readonly("center", [](const BubbleScale& sc) {
        return std::pair<double, double>{sc.center.x(), sc.center.y()};
      });

  py::class_<BubbleDecomposition>(m, "BubbleDecomposition")
      .def_readonly("p_eps", &BubbleDecomposition::p_eps)
      .def_readonly("scales", &BubbleDecomposition::scales)
      .def_readonly("residual_sup", &BubbleDecomposition::residual_sup)
      .def_readonly("cap_reached", &BubbleDecomposition::cap_reached);

  m.def(
      "extract_scales",
      [](const Domain& dom, const Eigen::VectorXd& u, double p_eps,
         const HalfspaceBubble* tpl, double a, double threshold, int n_max) {
        return extract_scales(dom.mesh, u, p_eps, dom.chart,
                              constant_field(a), tpl, threshold, 4.0, n_max);
      },
      py::arg("domain"), py::arg("u"), py::arg("p_eps"),
      py::arg("template") = nullptr, py::arg("a") = 0.0,
      py::arg("threshold") = 1.0, py::arg("n_max") = 4);

  py::class_<QuantizationReport>(m, "QuantizationReport")
      .def_readonly("total_energy", &QuantizationReport::total_energy)
      .def_readonly("weak_energy", &QuantizationReport::weak_energy)
      .def_readonly("bubble_energies", &QuantizationReport::bubble_energies)
      .def_readonly("additivity_gap", &QuantizationReport::additivity_gap)
      .def_readonly("quantum", &QuantizationReport::quantum)
      .def_readonly("quantized", &QuantizationReport::quantized);

  m.def(
      "energy_quantization",
      [](const Domain& dom, const Eigen::VectorXd& u,
         const BubbleDecomposition& dec, double mu_s, double tol) {
        return energy_quantization(dom.mesh, u, dec, mu_s, tol);
      },
      py::arg("domain"), py::arg("u"), py::arg("decomposition"),
      py::arg("mu_s"), py::arg("tol") = 0.02);

  m.def(
      "envelope_fit",
      [](const Domain& dom, const Eigen::VectorXd& u,
         const BubbleDecomposition& dec) {
        return envelope_fit(dom.mesh, u, dec.scales);
      },
      py::arg("domain"), py::arg("u"), py::arg("decomposition"));

  m.def("fundamental_kernel",
        py::overload_cast<double, int>(&fundamental_kernel), py::arg("dist"),
        py::arg("n"));

  py::class_<GreenKernel>(m, "GreenKernel")
      .def_readonly("pole", &GreenKernel::pole)
      .def_readonly("g", &GreenKernel::g)
      .def_readonly("reproduction_error", &GreenKernel::reproduction_error);

  py::class_<GreenConstants>(m, "GreenConstants")
      .def_readonly("c_kernel", &GreenConstants::c_kernel)
      .def_readonly("c_distance", &GreenConstants::c_distance)
      .def_readonly("c_gradient", &GreenConstants::c_gradient)
      .def_readonly("c_gradient_distance",
                    &GreenConstants::c_gradient_distance);

  py::class_<BoundaryKernel>(m, "BoundaryKernel")
      .def_readonly("poles", &BoundaryKernel::poles)
      .def_readonly("h", &BoundaryKernel::h)
      .def_readonly("c_upper", &BoundaryKernel::c_upper)
      .def_readonly("c_lower", &BoundaryKernel::c_lower)
      .def_readonly("rigidity_scale", &BoundaryKernel::rigidity_scale)
      .def_readonly("rigidity_residual", &BoundaryKernel::rigidity_residual);

  m.def("default_poles", &default_poles, py::arg("mesh"),
        py::arg("count") = 4);
  m.def("spread_poles", &spread_poles, py::arg("mesh"), py::arg("r_max"),
        py::arg("n_radii") = 3, py::arg("n_angles") = 4);
  m.def(
      "greens_solve",
      [](const MeridianMesh& mesh, double a, const std::vector<int>& poles) {
        return greens_solve(mesh, constant_field(a), poles);
      },
      py::arg("mesh"), py::arg("a"), py::arg("poles"));
  m.def(
      "estimate_constants",
      [](const MeridianMesh& mesh, const std::vector<GreenKernel>& kernels,
         double min_dist) {
        return estimate_constants(mesh, kernels, min_dist);
      },
      py::arg("mesh"), py::arg("kernels"), py::arg("min_dist") = 0.0);
  m.def(
      "boundary_kernel",
      [](const MeridianMesh& mesh, double a, const std::vector<int>& poles) {
        return boundary_kernel(mesh, constant_field(a), poles);
      },
      py::arg("mesh"), py::arg("a"), py::arg("poles"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("experiment", &ExperimentConfig::experiment)
      .def_readwrite("solver_gap", &ExperimentConfig::solver_gap)
      .def_readwrite("solver_p", &ExperimentConfig::solver_p)
      .def_readwrite("solver_a", &ExperimentConfig::solver_a)
      .def_readwrite("sweep_gap_min", &ExperimentConfig::sweep_gap_min)
      .def_readwrite("sweep_gap_max", &ExperimentConfig::sweep_gap_max)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir)
      .def_readwrite("report_ledgers", &ExperimentConfig::report_ledgers)
      .def("set", &apply_config_key, py::arg("key"), py::arg("value"))
      .def("config_hash", &ExperimentConfig::config_hash)
      .def("canonical", &ExperimentConfig::canonical);

  m.def("parse_config_file", &parse_config_file);
  m.def("validate_config", &validate_config);
  m.def("run_experiment", &run_experiment);
  m.def("config_schema", &config_schema);
}
