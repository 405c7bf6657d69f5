#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seglab/energy.hpp"
#include "seglab/exact.hpp"
#include "seglab/frequency.hpp"
#include "seglab/geometry.hpp"
#include "seglab/nodal.hpp"
#include "seglab/solver.hpp"
#include "seglab/verify.hpp"

namespace py = pybind11;
using namespace seglab;

namespace {

py::array_t<double> component_array(const Field3& f, const Grid& g, int c) {
    if (c < 0 || c > 2) throw py::index_error("component index must be 0, 1 or 2");
    py::array_t<double> out({g.n, g.n});
    auto r = out.mutable_unchecked<2>();
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) r(j, i) = f.u[c][g.idx(i, j)];
    return out;
}

void set_component(Field3& f, const Grid& g, int c, py::array_t<double> a) {
    if (c < 0 || c > 2) throw py::index_error("component index must be 0, 1 or 2");
    auto r = a.unchecked<2>();
    if (r.shape(0) != g.n || r.shape(1) != g.n)
        throw py::value_error("array shape must be (n, n)");
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) f.u[c][g.idx(i, j)] = r(j, i);
}

py::array_t<std::uint8_t> class_array(const Grid& g) {
    py::array_t<std::uint8_t> out({g.n, g.n});
    auto r = out.mutable_unchecked<2>();
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            r(j, i) = static_cast<std::uint8_t>(g.cls[g.idx(i, j)]);
    return out;
}

py::array_t<std::uint8_t> mult_array(const Grid& g, const std::vector<std::uint8_t>& m) {
    py::array_t<std::uint8_t> out({g.n, g.n});
    auto r = out.mutable_unchecked<2>();
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) r(j, i) = m[g.idx(i, j)];
    return out;
}

}  // namespace

PYBIND11_MODULE(_seglab, m) {
    m.doc() = "finite-difference laboratory for partially segregated harmonic triples";

    py::enum_<DomainKind>(m, "DomainKind")
        .value("Disc", DomainKind::Disc)
        .value("Rectangle", DomainKind::Rectangle)
        .value("Reference", DomainKind::Reference)
        .value("Custom", DomainKind::Custom);

    py::enum_<CellClass>(m, "CellClass")
        .value("Interior", CellClass::Interior)
        .value("Boundary", CellClass::Boundary)
        .value("Exterior", CellClass::Exterior);

    py::enum_<SolveMode>(m, "SolveMode")
        .value("Penalized", SolveMode::Penalized)
        .value("HardConstraint", SolveMode::HardConstraint);

    py::class_<Grid>(m, "Grid")
        .def_readonly("n", &Grid::n)
        .def_readonly("h", &Grid::h)
        .def_readonly("kind", &Grid::kind)
        .def("cx", &Grid::cx)
        .def("cy", &Grid::cy)
        .def("inradius", &Grid::inradius)
        .def("count", &Grid::count)
        .def("classes", &class_array);

    py::class_<Field3>(m, "Field3")
        .def_static("zeros", &Field3::zeros)
        .def("max_abs", &Field3::max_abs)
        .def("finite", &Field3::finite)
        .def("component", &component_array,
             py::arg("grid"), py::arg("c"))
        .def("set_component", &set_component,
             py::arg("grid"), py::arg("c"), py::arg("values"));

    py::class_<Trace>(m, "Trace")
        .def_static("tr_mer", &Trace::tr_mer)
        .def_static("constant", &Trace::constant)
        .def_static("from_csv", &Trace::from_csv)
        .def("eval", &Trace::eval);

    py::class_<BoundaryData>(m, "BoundaryData");

    py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
        .def_readonly("dirichlet", &EnergyBreakdown::dirichlet)
        .def_readonly("penalty", &EnergyBreakdown::penalty)
        .def_readonly("total", &EnergyBreakdown::total)
        .def_readonly("beta", &EnergyBreakdown::beta);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("mode", &SolverConfig::mode)
        .def_readwrite("beta_ladder", &SolverConfig::betaLadder)
        .def_readwrite("max_sweeps", &SolverConfig::maxSweeps)
        .def_readwrite("tol", &SolverConfig::tol)
        .def_readwrite("damping", &SolverConfig::damping)
        .def_readwrite("seed", &SolverConfig::seed)
        .def("to_json", &SolverConfig::to_json)
        .def_static("from_json_text", &SolverConfig::from_json_text)
        .def_static("from_json_file", &SolverConfig::from_json_file);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("field", &SolveReport::field)
        .def_readonly("energy_history", &SolveReport::energyHistory)
        .def_readonly("sweeps", &SolveReport::sweeps)
        .def_readonly("converged", &SolveReport::converged)
        .def_readonly("penalty_residual", &SolveReport::penaltyResidual);

    py::class_<FrequencyProfile>(m, "FrequencyProfile")
        .def_readonly("center", &FrequencyProfile::center)
        .def_readonly("radii", &FrequencyProfile::radii)
        .def_readonly("E", &FrequencyProfile::E)
        .def_readonly("H", &FrequencyProfile::H)
        .def_readonly("N", &FrequencyProfile::N)
        .def_readonly("included_penalty", &FrequencyProfile::includedPenalty)
        .def_readonly("beta", &FrequencyProfile::beta);

    py::class_<MonotoneReport>(m, "MonotoneReport")
        .def_readonly("ok", &MonotoneReport::ok)
        .def_readonly("worst_drop", &MonotoneReport::worstDrop)
        .def_readonly("worst_index", &MonotoneReport::worstIndex);

    py::class_<DoublingReport>(m, "DoublingReport")
        .def_readonly("lower_ok", &DoublingReport::lowerOk)
        .def_readonly("upper_ok", &DoublingReport::upperOk)
        .def_readonly("worst_lower", &DoublingReport::worstLower)
        .def_readonly("worst_upper", &DoublingReport::worstUpper);

    py::class_<ExponentFit>(m, "ExponentFit")
        .def_readonly("gamma", &ExponentFit::gamma)
        .def_readonly("r2", &ExponentFit::r2);

    py::class_<ExactFrequency>(m, "ExactFrequency")
        .def_readonly("E", &ExactFrequency::E)
        .def_readonly("H", &ExactFrequency::H)
        .def_readonly("N", &ExactFrequency::N);

    py::class_<TriplePoint>(m, "TriplePoint")
        .def_readonly("x", &TriplePoint::x)
        .def_readonly("y", &TriplePoint::y)
        .def_readonly("cells", &TriplePoint::cells);

    py::class_<Polyline>(m, "Polyline")
        .def_readonly("ci", &Polyline::ci)
        .def_readonly("cj", &Polyline::cj)
        .def_readonly("pts", &Polyline::pts)
        .def_readonly("closed", &Polyline::closed);

    py::class_<PartitionReport>(m, "PartitionReport")
        .def_readonly("partition_ok", &PartitionReport::partitionOk)
        .def_readonly("zero_set_closure_ok", &PartitionReport::zeroSetClosureOk)
        .def_readonly("degenerate_component", &PartitionReport::degenerateComponent);

    py::class_<CriterionResult>(m, "CriterionResult")
        .def_readonly("id", &CriterionResult::id)
        .def_readonly("name", &CriterionResult::name)
        .def_readonly("pass_", &CriterionResult::pass)
        .def_readonly("details", &CriterionResult::details)
        .def_readonly("seconds", &CriterionResult::seconds);

    m.def("build_grid", &build_grid, py::arg("kind"), py::arg("n"));
    m.def("sample_boundary", &sample_boundary);
    m.def("harmonic_extension", &harmonic_extension, py::arg("grid"), py::arg("boundary"),
          py::arg("tol") = 1e-10, py::arg("max_iter") = 200000);
    m.def("interp_bilinear", &interp_bilinear3);
    m.def("dump_csv", &dump_csv);
    m.def("load_csv", &load_csv);

    m.def("psi", &psi);
    m.def("exact_minimizer", &exact_minimizer);
    m.def("exact_frequency_values", &exact_frequency_values);
    m.def("exact_total_energy", &exact_total_energy);

    m.def("dirichlet_energy", &dirichlet_energy);
    m.def("penalty_energy", &penalty_energy);
    m.def("j_beta", &j_beta);
    m.def("gradient", &gradient);
    m.def("gradient_max_norm", &gradient_max_norm);

    m.def("solve_penalized", &solve_penalized, py::arg("grid"), py::arg("boundary"),
          py::arg("beta"), py::arg("config"), py::arg("init") = std::nullopt,
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_beta", &sweep_beta, py::call_guard<py::gil_scoped_release>());
    m.def("solve_hard_constraint", &solve_hard_constraint, py::arg("grid"),
          py::arg("boundary"), py::arg("config"), py::arg("init") = std::nullopt,
          py::call_guard<py::gil_scoped_release>());

    m.def("circle_quadrature",
          [](const Grid& g, const Field3& f, std::array<double, 2> x0, double r, int M) {
              auto q = circle_quadrature(g, f, x0, r, M);
              return py::make_tuple(q.sumSquares, q.normalFluxSquares);
          },
          py::arg("grid"), py::arg("field"), py::arg("center"), py::arg("r"),
          py::arg("samples") = 720);
    m.def("frequency_profile", &frequency_profile, py::arg("grid"), py::arg("field"),
          py::arg("center"), py::arg("rmin"), py::arg("rmax"), py::arg("k"),
          py::arg("include_penalty") = false, py::arg("beta") = 0.0,
          py::arg("samples") = 720);
    m.def("check_monotone", &check_monotone);
    m.def("check_doubling", &check_doubling, py::arg("profile"), py::arg("alpha_low"),
          py::arg("alpha_high"), py::arg("slack_factor") = 1.05);
    m.def("pohozaev_residual", &pohozaev_residual, py::arg("grid"), py::arg("field"),
          py::arg("center"), py::arg("r"), py::arg("samples") = 720);
    m.def("blow_up", &blow_up);
    m.def("estimate_exponent", &estimate_exponent);

    m.attr("DEFAULT_TAU") = kDefaultTau;
    m.def("holder_tau", &holder_tau);
    m.def("multiplicity_map",
          [](const Grid& g, const Field3& f, double tau) {
              return mult_array(g, multiplicity_map(g, f, tau));
          });
    m.def("detect_triple_points", &detect_triple_points);
    m.def("extract_interfaces", &extract_interfaces);
    m.def("count_loops", &count_loops);
    m.def("check_partition", &check_partition);
    m.def("interface_direction", &interface_direction);

    m.def("psi_support", []() {
        auto s = psi_support();
        std::vector<std::vector<std::pair<double, double>>> out(3);
        for (int c = 0; c < 3; ++c)
            for (const auto& arc : s.arcs[c]) out[c].emplace_back(arc.a, arc.b);
        return out;
    });
    m.def("min_homogeneity",
          [](const std::vector<std::vector<std::pair<double, double>>>& arcs) {
              if (arcs.size() != 3)
                  throw py::value_error("expected three lists of (a, b) arcs");
              AngularSupport s;
              for (int c = 0; c < 3; ++c)
                  for (const auto& [a, b] : arcs[c])
                      s.arcs[c].push_back({a, b});
              return min_homogeneity(s);
          });

    m.def("run_verification", &run_verification, py::call_guard<py::gil_scoped_release>());
    m.def("verification_json", &verification_json);
}
