#include "powershap/report.hpp"

#include <cmath>

#include "json.hpp"

namespace powershap {

namespace {

using Json = nlohmann::ordered_json;

Json effect_json(double d) {
  if (std::isnan(d)) return nullptr;
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  return d;
}

Json required_json(double r) {
  if (std::isnan(r)) return nullptr;
  if (std::isinf(r)) return "unattainable";
  return r;
}

Json features_json(const FeatureReport& report, const std::vector<std::string>& names,
                   const std::vector<std::size_t>& selected) {
  std::vector<bool> chosen(report.size(), false);
  for (auto j : selected) chosen[j] = true;
  Json out = Json::array();
  for (std::size_t j = 0; j < report.size(); ++j) {
    Json row;
    row["name"] = names[j];
    row["p_value"] = report.p_value[j];
    row["effect_size"] = effect_json(report.effect_size[j]);
    row["required_iterations"] = required_json(report.required_iterations[j]);
    row["mean_impact"] = report.mean_impact[j];
    row["selected"] = static_cast<bool>(chosen[j]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string to_json(const RunReport& report) {
  const auto& config = report.config;
  const auto& learner = report.learner;

  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["input"] = report.input;
  doc["target"] = report.target;
  doc["task"] = task_name(report.task);

  Json cfg;
  cfg["mode"] = mode_name(config.mode);
  cfg["alpha"] = config.alpha;
  cfg["required_power"] = config.required_power;
  if (config.mode == SelectionMode::Fixed) {
    cfg["iterations"] = config.fixed_iterations;
  } else {
    cfg["initial_iterations"] = config.initial_iterations;
    cfg["max_iterations"] = config.max_iterations;
  }
  cfg["val_fraction"] = config.val_fraction;
  cfg["p_value_style"] = p_value_style_name(config.p_value_style);
  Json model;
  model["kind"] = learner_name(learner.kind);
  if (learner.kind == models::LearnerKind::GradientBoostedTrees) {
    model["n_estimators"] = learner.n_estimators;
    model["max_depth"] = learner.max_depth;
    model["learning_rate"] = learner.learning_rate;
    model["min_samples_leaf"] = learner.min_samples_leaf;
    model["leaf_l2"] = learner.leaf_l2;
  } else {
    model["l2_penalty"] = learner.l2_penalty;
  }
  cfg["learner"] = std::move(model);
  doc["config"] = std::move(cfg);
  doc["seed"] = config.base_seed;

  const auto& result = report.result;
  doc["selected"] = result.selected_names;
  doc["iterations_performed"] = result.iterations_performed;
  doc["truncated"] = result.truncated;
  doc["features"] = features_json(result.report, report.feature_names, result.selected);

  Json rounds = Json::array();
  for (const auto& round : result.rounds) {
    std::vector<std::string> round_names;
    for (auto j : round.features) round_names.push_back(report.feature_names[j]);
    std::vector<std::size_t> local_selected;
    for (std::size_t local = 0; local < round.features.size(); ++local) {
      for (auto j : round.selected) {
        if (round.features[local] == j) local_selected.push_back(local);
      }
    }
    Json r;
    std::vector<std::string> selected_names;
    for (auto j : round.selected) selected_names.push_back(report.feature_names[j]);
    r["selected"] = std::move(selected_names);
    r["iterations_performed"] = round.iterations_performed;
    r["truncated"] = round.truncated;
    r["features"] = features_json(round.report, round_names, local_selected);
    rounds.push_back(std::move(r));
  }
  doc["rounds"] = std::move(rounds);
  doc["wall_time_seconds"] = report.wall_time_seconds;
  return doc.dump(2) + "\n";
}

}  // namespace powershap
