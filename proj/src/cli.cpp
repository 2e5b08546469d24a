#include "powershap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "powershap/csv.hpp"
#include "powershap/datagen.hpp"
#include "powershap/errors.hpp"
#include "powershap/report.hpp"
#include "powershap/selection.hpp"
#include "powershap/stats.hpp"

namespace powershap::cli {

namespace {

const std::map<std::string, Task> kTasks{{"classification", Task::BinaryClassification},
                                         {"regression", Task::Regression}};
const std::map<std::string, SelectionMode> kModes{{"fixed", SelectionMode::Fixed},
                                                  {"automatic", SelectionMode::Automatic},
                                                  {"convergence", SelectionMode::Convergence}};
const std::map<std::string, models::LearnerKind> kLearners{
    {"gbt", models::LearnerKind::GradientBoostedTrees}, {"linear", models::LearnerKind::Linear}};
const std::map<std::string, PValueStyle> kStyles{{"anticonservative", PValueStyle::Anticonservative},
                                                 {"north", PValueStyle::NorthCorrected}};

struct SelectionFlags {
  PowershapConfig config;
  models::LearnerSpec learner;
};

void add_selection_flags(CLI::App& cmd, SelectionFlags& f) {
  auto& c = f.config;
  auto& l = f.learner;
  cmd.add_option("--mode", c.mode, "fixed | automatic | convergence")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case).description(""))
      ->default_str("automatic");
  cmd.add_option("--iterations", c.fixed_iterations, "Iterations in fixed mode")->capture_default_str();
  cmd.add_option("--initial-iterations", c.initial_iterations, "First block in automatic mode")
      ->capture_default_str();
  cmd.add_option("--max-iterations", c.max_iterations, "Iteration cap in automatic mode")
      ->capture_default_str();
  cmd.add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
  cmd.add_option("--power", c.required_power, "Required power")->capture_default_str();
  cmd.add_option("--val-fraction", c.val_fraction, "Validation share of each split")
      ->capture_default_str();
  cmd.add_option("--seed", c.base_seed, "Base seed")->capture_default_str();
  cmd.add_option("--p-value-style", c.p_value_style, "anticonservative | north")
      ->transform(CLI::CheckedTransformer(kStyles, CLI::ignore_case).description(""))
      ->default_str("anticonservative");
  cmd.add_option("--threads", c.threads, "Worker threads, 0 = POWERSHAP_THREADS or all cores");
  cmd.add_option("--learner", l.kind, "gbt | linear")
      ->transform(CLI::CheckedTransformer(kLearners, CLI::ignore_case).description(""))
      ->default_str("gbt");
  cmd.add_option("--n-estimators", l.n_estimators)->capture_default_str();
  cmd.add_option("--max-depth", l.max_depth)->capture_default_str();
  cmd.add_option("--learning-rate", l.learning_rate)->capture_default_str();
  cmd.add_option("--min-samples-leaf", l.min_samples_leaf)->capture_default_str();
  cmd.add_option("--leaf-l2", l.leaf_l2)->capture_default_str();
  cmd.add_option("--l2-penalty", l.l2_penalty, "Linear learner ridge penalty")->capture_default_str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::FileNotFound, "cannot write '" + path + "'");
  file << text;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct SelectArgs {
  std::string csv;
  std::string target;
  Task task = Task::BinaryClassification;
  std::string output;
  SelectionFlags flags;
};

void cmd_select(const SelectArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  a.flags.learner.validate();
  a.flags.config.validate();
  const auto data = csv::to_dataset(csv::read_file(a.csv), a.target, a.task);

  RunReport report;
  report.config = a.flags.config;
  report.learner = a.flags.learner;
  report.task = a.task;
  report.input = std::filesystem::path(a.csv).filename().string();
  report.target = a.target;
  report.feature_names = data.feature_names();
  report.result = select(data, a.flags.learner, a.flags.config);
  report.wall_time_seconds = seconds_since(start);
  write_text(a.output, to_json(report), out);
}

struct SimulateArgs {
  std::vector<std::size_t> features{20};
  std::vector<double> ratios{0.1};
  std::size_t repeats = 5;
  std::size_t samples = 5000;
  Task task = Task::BinaryClassification;
  std::string output;
  SelectionFlags flags;
};

std::size_t informative_count(std::size_t m, double ratio) {
  const auto k = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(m)));
  return std::clamp<std::size_t>(k, 1, m);
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  a.flags.learner.validate();
  a.flags.config.validate();
  for (double r : a.ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidSpec, "ratios must lie in (0, 1]");
  }
  if (a.repeats == 0) throw Error(ErrorCode::InvalidSpec, "repeats must be positive");

  struct Cell {
    std::size_t m, k;
  };
  std::vector<Cell> cells;
  for (auto m : a.features) {
    for (double r : a.ratios) cells.push_back({m, informative_count(m, r)});
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& x, const Cell& y) { return std::tie(x.m, x.k) < std::tie(y.m, y.k); });
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const Cell& x, const Cell& y) { return x.m == y.m && x.k == y.k; }),
              cells.end());

  std::ostringstream table;
  table << "m,k,repeat,recovered_informative_pct,selected_noise_count,duration_seconds\n";
  for (const auto& cell : cells) {
    for (std::size_t rep = 0; rep < a.repeats; ++rep) {
      datagen::SimSpec spec;
      spec.n_samples = a.samples;
      spec.n_features = cell.m;
      spec.n_informative = cell.k;
      spec.task = a.task;
      spec.seed = a.flags.config.base_seed + rep;
      const auto sim = datagen::make_dataset(spec);

      PowershapConfig config = a.flags.config;
      config.base_seed = spec.seed;
      const auto start = std::chrono::steady_clock::now();
      const auto result = select(sim.data, a.flags.learner, config);
      const double duration = seconds_since(start);

      std::size_t hits = 0, noise = 0;
      for (auto j : result.selected) (sim.informative[j] ? hits : noise)++;
      const double pct = 100.0 * static_cast<double>(hits) / static_cast<double>(cell.k);
      table << cell.m << ',' << cell.k << ',' << rep << ',' << pct << ',' << noise << ','
            << duration << '\n';
    }
  }
  write_text(a.output, table.str(), out);
}

struct GenerateArgs {
  datagen::SimSpec spec;
  std::string output;
  std::string truth;
};

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto sim = datagen::make_dataset(a.spec);
  std::ostringstream text;
  csv::write_dataset(text, sim.data, "y");
  write_text(a.output, text.str(), out);
  if (!a.truth.empty()) {
    nlohmann::ordered_json doc;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < sim.informative.size(); ++j) {
      if (sim.informative[j]) names.push_back(sim.data.feature_names()[j]);
    }
    doc["informative"] = names;
    write_text(a.truth, doc.dump(2) + "\n", out);
  }
}

struct PowerArgs {
  double alpha = 0.01;
  double power = 0.99;
  double effect_size = 0.0;
};

void cmd_power(const PowerArgs& a, std::ostream& out) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "alpha must lie in (0, 1)");
  }
  const double required = stats::solve_required_iterations({a.alpha, a.power, a.effect_size});
  if (std::isinf(required)) {
    out << "unattainable\n";
  } else {
    out << static_cast<long long>(std::ceil(required)) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapley-impact feature selection against a random probe"};
  app.name("powershap");
  app.require_subcommand(1);

  SelectArgs select_args;
  auto* select_cmd = app.add_subcommand("select", "Select features from a CSV file");
  select_cmd->add_option("--csv", select_args.csv, "Input CSV with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  select_cmd->add_option("--target", select_args.target, "Target column name")->required();
  select_cmd->add_option("--task", select_args.task, "classification | regression")
      ->transform(CLI::CheckedTransformer(kTasks, CLI::ignore_case).description(""))
      ->required();
  select_cmd->add_option("--output,-o", select_args.output, "JSON report path (default stdout)");
  add_selection_flags(*select_cmd, select_args.flags);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Recovery benchmark on generated datasets");
  sim_cmd->add_option("--features", sim_args.features, "Total feature counts")->capture_default_str();
  sim_cmd->add_option("--ratios", sim_args.ratios, "Informative fractions")->capture_default_str();
  sim_cmd->add_option("--repeats", sim_args.repeats)->capture_default_str();
  sim_cmd->add_option("--samples", sim_args.samples)->capture_default_str();
  sim_cmd->add_option("--task", sim_args.task, "classification | regression")
      ->transform(CLI::CheckedTransformer(kTasks, CLI::ignore_case).description(""));
  sim_cmd->add_option("--output,-o", sim_args.output, "CSV path (default stdout)");
  add_selection_flags(*sim_cmd, sim_args.flags);

  GenerateArgs gen_args;
  auto& spec = gen_args.spec;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  gen_cmd->add_option("--samples", spec.n_samples)->capture_default_str();
  gen_cmd->add_option("--features", spec.n_features)->capture_default_str();
  gen_cmd->add_option("--informative", spec.n_informative)->capture_default_str();
  gen_cmd->add_option("--class-sep", spec.class_sep)->capture_default_str();
  gen_cmd->add_option("--clusters-per-class", spec.clusters_per_class)->capture_default_str();
  gen_cmd->add_option("--noise-ratio", spec.noise_ratio)->capture_default_str();
  gen_cmd->add_option("--task", spec.task, "classification | regression")
      ->transform(CLI::CheckedTransformer(kTasks, CLI::ignore_case).description(""));
  gen_cmd->add_option("--seed", spec.seed)->capture_default_str();
  gen_cmd->add_option("--output,-o", gen_args.output, "CSV path (default stdout)");
  gen_cmd->add_option("--truth", gen_args.truth, "JSON file listing the informative columns");

  PowerArgs power_args;
  auto* power_cmd = app.add_subcommand("power", "Iterations needed to reach a target power");
  power_cmd->add_option("--alpha", power_args.alpha)->capture_default_str();
  power_cmd->add_option("--power", power_args.power)->capture_default_str();
  power_cmd->add_option("--effect-size,-d", power_args.effect_size)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*select_cmd) cmd_select(select_args, out);
    if (*sim_cmd) cmd_simulate(sim_args, out);
    if (*gen_cmd) cmd_generate(gen_args, out);
    if (*power_cmd) cmd_power(power_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitValidation : kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace powershap::cli
