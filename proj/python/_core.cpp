#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "powershap/datagen.hpp"
#include "powershap/errors.hpp"
#include "powershap/report.hpp"
#include "powershap/selection.hpp"
#include "powershap/stats.hpp"

namespace py = pybind11;
using namespace powershap;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <typename T>
T lookup(const std::map<std::string, T>& table, const std::string& key, const char* what) {
  const auto it = table.find(key);
  if (it == table.end()) throw Error(ErrorCode::InvalidConfig, std::string("unknown ") + what + " '" + key + "'");
  return it->second;
}

Task parse_task(const std::string& s) {
  return lookup<Task>({{"classification", Task::BinaryClassification}, {"regression", Task::Regression}},
                      s, "task");
}

Dataset to_dataset(const Array& x, const Array& y, std::optional<std::vector<std::string>> names,
                   Task task) {
  if (x.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "X must be 2-D");
  if (y.ndim() != 1) throw Error(ErrorCode::DimensionMismatch, "y must be 1-D");
  const auto rows = static_cast<std::size_t>(x.shape(0));
  const auto cols = static_cast<std::size_t>(x.shape(1));
  Matrix features(rows, cols, std::vector<double>(x.data(), x.data() + rows * cols));
  std::vector<double> target(y.data(), y.data() + y.shape(0));
  if (!names) {
    names.emplace();
    for (std::size_t j = 0; j < cols; ++j) names->push_back("f" + std::to_string(j));
  }
  return validate_dataset(std::move(features), std::move(target), std::move(*names), task);
}

std::string select_json(const Array& x, const Array& y, const std::string& task,
                        std::optional<std::vector<std::string>> names, const std::string& mode,
                        double alpha, double power, std::size_t iterations,
                        std::size_t initial_iterations, std::size_t max_iterations,
                        double val_fraction, std::uint64_t seed, const std::string& p_value_style,
                        std::size_t threads, const std::string& learner, std::size_t n_estimators,
                        std::size_t max_depth, double learning_rate, std::size_t min_samples_leaf,
                        double leaf_l2, double l2_penalty) {
  RunReport report;
  report.task = parse_task(task);
  auto& c = report.config;
  c.mode = lookup<SelectionMode>({{"fixed", SelectionMode::Fixed},
                                  {"automatic", SelectionMode::Automatic},
                                  {"convergence", SelectionMode::Convergence}},
                                 mode, "mode");
  c.alpha = alpha;
  c.required_power = power;
  c.fixed_iterations = iterations;
  c.initial_iterations = initial_iterations;
  c.max_iterations = max_iterations;
  c.val_fraction = val_fraction;
  c.base_seed = seed;
  c.p_value_style = lookup<PValueStyle>(
      {{"anticonservative", PValueStyle::Anticonservative}, {"north", PValueStyle::NorthCorrected}},
      p_value_style, "p-value style");
  c.threads = threads;
  auto& l = report.learner;
  l.kind = lookup<models::LearnerKind>(
      {{"gbt", models::LearnerKind::GradientBoostedTrees}, {"linear", models::LearnerKind::Linear}},
      learner, "learner");
  l.n_estimators = n_estimators;
  l.max_depth = max_depth;
  l.learning_rate = learning_rate;
  l.min_samples_leaf = min_samples_leaf;
  l.leaf_l2 = leaf_l2;
  l.l2_penalty = l2_penalty;

  const Dataset data = to_dataset(x, y, std::move(names), report.task);
  report.feature_names = data.feature_names();
  {
    py::gil_scoped_release release;
    report.result = select(data, l, c);
  }
  return to_json(report);
}

py::tuple make_dataset(std::size_t n_samples, std::size_t n_features, std::size_t n_informative,
                       double class_sep, std::size_t clusters_per_class, double noise_ratio,
                       const std::string& task, std::uint64_t seed) {
  datagen::SimSpec spec;
  spec.n_samples = n_samples;
  spec.n_features = n_features;
  spec.n_informative = n_informative;
  spec.class_sep = class_sep;
  spec.clusters_per_class = clusters_per_class;
  spec.noise_ratio = noise_ratio;
  spec.task = parse_task(task);
  spec.seed = seed;
  const auto sim = datagen::make_dataset(spec);
  Array x({sim.data.n_samples(), sim.data.n_features()});
  std::copy(sim.data.features().data().begin(), sim.data.features().data().end(), x.mutable_data());
  Array y(static_cast<py::ssize_t>(sim.data.n_samples()));
  std::copy(sim.data.target().begin(), sim.data.target().end(), y.mutable_data());
  std::vector<bool> mask = sim.informative;
  return py::make_tuple(x, y, mask);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> validation_error(m, "ValidationError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (is_validation_error(e.code())) {
        py::set_error(validation_error, e.what());
      } else {
        py::set_error(PyExc_RuntimeError, e.what());
      }
    }
  });

  const PowershapConfig c;
  const models::LearnerSpec l;
  m.def("select_json", &select_json, py::arg("X"), py::arg("y"), py::arg("task") = "classification",
        py::arg("feature_names") = py::none(), py::arg("mode") = "automatic",
        py::arg("alpha") = c.alpha, py::arg("power") = c.required_power,
        py::arg("iterations") = c.fixed_iterations,
        py::arg("initial_iterations") = c.initial_iterations,
        py::arg("max_iterations") = c.max_iterations, py::arg("val_fraction") = c.val_fraction,
        py::arg("seed") = c.base_seed, py::arg("p_value_style") = "anticonservative",
        py::arg("threads") = c.threads, py::arg("learner") = "gbt",
        py::arg("n_estimators") = l.n_estimators, py::arg("max_depth") = l.max_depth,
        py::arg("learning_rate") = l.learning_rate,
        py::arg("min_samples_leaf") = l.min_samples_leaf, py::arg("leaf_l2") = l.leaf_l2,
        py::arg("l2_penalty") = l.l2_penalty,
        "Runs a selection and returns the JSON report the CLI would write.");

  m.def("required_iterations",
        [](double alpha, double power, double effect_size) {
          return stats::solve_required_iterations({alpha, power, effect_size});
        },
        py::arg("alpha"), py::arg("power"), py::arg("effect_size"));
  m.def("tt_test_power", &stats::tt_test_power, py::arg("alpha"), py::arg("iterations"),
        py::arg("effect_size"));

  datagen::SimSpec s;
  m.def("make_dataset", &make_dataset, py::arg("n_samples") = s.n_samples,
        py::arg("n_features") = s.n_features, py::arg("n_informative") = s.n_informative,
        py::arg("class_sep") = s.class_sep, py::arg("clusters_per_class") = s.clusters_per_class,
        py::arg("noise_ratio") = s.noise_ratio, py::arg("task") = "classification",
        py::arg("seed") = s.seed, "Returns (X, y, informative_mask).");
}
