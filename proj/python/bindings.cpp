#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "poolbp/bp.hpp"
#include "poolbp/errors.hpp"
#include "poolbp/exact.hpp"
#include "poolbp/harness.hpp"
#include "poolbp/matrix_io.hpp"
#include "poolbp/pooling.hpp"
#include "poolbp/sim.hpp"

namespace py = pybind11;
using namespace poolbp;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-type group testing: AG(3,q) pooling designs and belief-propagation decoding";

  // ValidationError derives from std::invalid_argument and surfaces as ValueError.
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NumericDegeneracy>(m, "NumericDegeneracy", PyExc_ArithmeticError);

  py::class_<IncidenceMatrix>(m, "IncidenceMatrix")
      .def(py::init([](std::size_t n_rows, std::size_t n_cols, std::vector<std::vector<Index>> rows) {
             return IncidenceMatrix(n_rows, n_cols, std::move(rows));
           }),
           py::arg("n_rows"), py::arg("n_cols"), py::arg("rows"))
      .def_static("from_dense", &IncidenceMatrix::from_dense, py::arg("dense"))
      .def_property_readonly("n_rows", &IncidenceMatrix::n_rows)
      .def_property_readonly("n_cols", &IncidenceMatrix::n_cols)
      .def_property_readonly("nnz", &IncidenceMatrix::nnz)
      .def("row", [](const IncidenceMatrix& x, std::size_t i) {
        if (i >= x.n_rows()) throw py::index_error("row out of range");
        auto r = x.row(i);
        return std::vector<Index>(r.begin(), r.end());
      })
      .def("col", [](const IncidenceMatrix& x, std::size_t j) {
        if (j >= x.n_cols()) throw py::index_error("column out of range");
        auto c = x.col(j);
        return std::vector<Index>(c.begin(), c.end());
      })
      .def("to_dense", &IncidenceMatrix::to_dense)
      .def("permute_columns", &IncidenceMatrix::permute_columns, py::arg("perm"))
      .def(py::self == py::self);

  py::class_<PoolingDesign>(m, "PoolingDesign")
      .def(py::init([](IncidenceMatrix a, IncidenceMatrix b, IncidenceMatrix ab) {
             PoolingDesign d{std::move(a), std::move(b), std::move(ab), std::nullopt};
             d.validate();
             return d;
           }),
           py::arg("m_a"), py::arg("m_b"), py::arg("m_ab"))
      .def_readonly("m_a", &PoolingDesign::m_a)
      .def_readonly("m_b", &PoolingDesign::m_b)
      .def_readonly("m_ab", &PoolingDesign::m_ab)
      .def_property_readonly("n_items", &PoolingDesign::n_items)
      .def_property_readonly("n_pools", &PoolingDesign::n_pools);

  m.def("stack_planes", &stack_planes, py::arg("q"), py::arg("planes"));
  m.def("build_design", &build_design, py::arg("q"), py::arg("k_a"), py::arg("k_b"), py::arg("k_ab"));
  m.def("build_split_design", &build_split_design, py::arg("q"), py::arg("k"));
  m.def("import_design", &import_design, py::arg("path"));
  m.def("export_design", &export_design, py::arg("path"), py::arg("design"));

  m.def(
      "unique_collinearity",
      [](const IncidenceMatrix& x) {
        const auto r = unique_collinearity_check(x);
        return py::make_tuple(r.holds, r.violation);
      },
      py::arg("matrix"), "(holds, first violating row pair or None)");
  m.def(
      "is_disjunct",
      [](const IncidenceMatrix& x, std::uint32_t d, std::uint64_t budget) {
        return is_disjunct(x, d, {budget});
      },
      py::arg("matrix"), py::arg("d"), py::arg("budget") = WorkBudget{}.max_work);
  m.def(
      "is_separable_bar",
      [](const IncidenceMatrix& x, std::uint32_t d, std::uint64_t budget) {
        return is_separable_bar(x, d, {budget});
      },
      py::arg("matrix"), py::arg("d"), py::arg("budget") = WorkBudget{}.max_work);
  m.def(
      "is_2d_separable",
      [](const PoolingDesign& x, std::uint32_t d, std::uint64_t budget) {
        return is_2d_separable(x, d, {budget});
      },
      py::arg("design"), py::arg("d"), py::arg("budget") = WorkBudget{}.max_work);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<double, double>(), py::arg("sensitivity") = 0.97, py::arg("specificity") = 0.99)
      .def_static("noiseless", &NoiseModel::noiseless)
      .def_readwrite("sensitivity", &NoiseModel::sensitivity)
      .def_readwrite("specificity", &NoiseModel::specificity);

  py::class_<Priors>(m, "Priors")
      .def(py::init<double, double>(), py::arg("p_a") = 0.002, py::arg("p_b") = 0.002)
      .def_readwrite("p_a", &Priors::p_a)
      .def_readwrite("p_b", &Priors::p_b);

  py::class_<PoolVectors>(m, "Observations")
      .def(py::init([](std::vector<std::uint8_t> a, std::vector<std::uint8_t> b, std::vector<std::uint8_t> ab) {
             return PoolVectors{std::move(a), std::move(b), std::move(ab)};
           }),
           py::arg("a"), py::arg("b"), py::arg("ab"))
      .def_readwrite("a", &PoolVectors::a)
      .def_readwrite("b", &PoolVectors::b)
      .def_readwrite("ab", &PoolVectors::ab);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def(py::init([](std::vector<std::uint8_t> a, std::vector<std::uint8_t> b) {
             return GroundTruth{std::move(a), std::move(b)};
           }),
           py::arg("x_a"), py::arg("x_b"))
      .def_readonly("x_a", &GroundTruth::x_a)
      .def_readonly("x_b", &GroundTruth::x_b);

  m.def("true_pool_states", &true_pool_states, py::arg("design"), py::arg("truth"));
  m.def(
      "simulate",
      [](const PoolingDesign& d, std::size_t count_a, std::size_t count_b, const NoiseModel& noise,
         std::uint64_t seed, std::size_t rep) {
        Rng rng = Rng::for_replication(seed, rep);
        auto truth = plant_fixed(d.n_items(), count_a, count_b, rng);
        auto obs = observe(d, truth, noise, rng);
        return py::make_tuple(truth, obs);
      },
      py::arg("design"), py::arg("count_a"), py::arg("count_b"), py::arg("noise") = NoiseModel{},
      py::arg("seed") = 1, py::arg("rep") = 0, "Plant fixed counts and observe; returns (truth, observations).");

  py::class_<Marginals>(m, "Marginals")
      .def_readonly("joint", &Marginals::joint)
      .def_property_readonly("prob_a", &Marginals::defective_a)
      .def_property_readonly("prob_b", &Marginals::defective_b);

  py::class_<BpResult>(m, "BpResult")
      .def_readonly("marginals", &BpResult::marginals)
      .def_readonly("converged", &BpResult::converged)
      .def_readonly("iterations", &BpResult::iterations);

  m.def(
      "run_bp",
      [](const PoolingDesign& d, const Observations& obs, const Priors& priors, const NoiseModel& noise,
         double epsilon, int max_iterations) {
        return run_bp(d, obs, priors, noise, {epsilon, max_iterations});
      },
      py::arg("design"), py::arg("observations"), py::arg("priors") = Priors{}, py::arg("noise") = NoiseModel{},
      py::arg("epsilon") = BpSettings{}.epsilon, py::arg("max_iterations") = BpSettings{}.max_iterations);
  m.def(
      "exact_posterior",
      [](const PoolingDesign& d, const Observations& obs, const Priors& priors, const NoiseModel& noise,
         std::uint64_t budget) { return exact_posterior(d, obs, priors, noise, {budget}); },
      py::arg("design"), py::arg("observations"), py::arg("priors") = Priors{}, py::arg("noise") = NoiseModel{},
      py::arg("budget") = ExactBudget{}.max_work);

  py::class_<TypeSummary>(m, "TypeSummary")
      .def_readonly("q95", &TypeSummary::q95)
      .def_readonly("q99", &TypeSummary::q99)
      .def_readonly("included", &TypeSummary::included);

  py::class_<RankSummary>(m, "RankSummary")
      .def_readonly("a", &RankSummary::a)
      .def_readonly("b", &RankSummary::b)
      .def_readonly("replications", &RankSummary::replications)
      .def_readonly("failures", &RankSummary::failures)
      .def_readonly("convergence_rate", &RankSummary::convergence_rate)
      .def_readonly("mean_iterations", &RankSummary::mean_iterations);

  py::class_<RankRecord>(m, "RankRecord")
      .def_readonly("rep", &RankRecord::rep)
      .def_readonly("worst_rank_a", &RankRecord::worst_rank_a)
      .def_readonly("worst_rank_b", &RankRecord::worst_rank_b)
      .def_readonly("converged", &RankRecord::converged)
      .def_readonly("iterations", &RankRecord::iterations)
      .def_readonly("error", &RankRecord::error);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("summary", &ExperimentResult::summary)
      .def_readonly("records", &ExperimentResult::records);

  m.def(
      "run_experiment",
      [](std::uint32_t q, PlaneSet k_a, PlaneSet k_b, PlaneSet k_ab, std::size_t count_a, std::size_t count_b,
         const NoiseModel& noise, const Priors& priors, std::size_t replications, std::uint64_t seed,
         unsigned threads) {
        ExperimentConfig cfg;
        cfg.q = q;
        cfg.k_a = std::move(k_a);
        cfg.k_b = std::move(k_b);
        cfg.k_ab = std::move(k_ab);
        cfg.count_a = count_a;
        cfg.count_b = count_b;
        cfg.noise = noise;
        cfg.priors = priors;
        cfg.replications = replications;
        cfg.seed = seed;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return run_experiment(cfg);
      },
      py::arg("q") = 7, py::arg("k_a") = PlaneSet{0, 1, 2}, py::arg("k_b") = PlaneSet{0, 1, 2},
      py::arg("k_ab") = PlaneSet{3, 4, 5, 6}, py::arg("count_a") = 6, py::arg("count_b") = 6,
      py::arg("noise") = NoiseModel{}, py::arg("priors") = Priors{}, py::arg("replications") = 1000,
      py::arg("seed") = 1, py::arg("threads") = 0);
}
