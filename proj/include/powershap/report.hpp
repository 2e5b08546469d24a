#pragma once

#include <string>

#include "powershap/domain.hpp"
#include "powershap/models.hpp"

namespace powershap {

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
  PowershapConfig config;
  models::LearnerSpec learner;
  Task task = Task::BinaryClassification;
  std::string input;
  std::string target;
  std::vector<std::string> feature_names;
  SelectionResult result;
  double wall_time_seconds = 0.0;
};

/// Pretty-printed JSON, keys in a fixed order, features in input order.
/// Non-finite numbers are written as strings: required_iterations uses
/// "unattainable" for the solver's sentinel and null when undefined;
/// effect_size uses "inf" / "-inf".
std::string to_json(const RunReport& report);

}  // namespace powershap
