#pragma once

#include "pwsgd/constraints.hpp"
#include "pwsgd/experiment.hpp"
#include "pwsgd/precondition.hpp"
#include "pwsgd/sgd.hpp"
#include "pwsgd/sketch.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace pwsgd {

// JSON mappings. Readers fill missing keys with the struct defaults and reject unknown enum names.
void to_json(nlohmann::json& j, const SketchSpec& s);
void from_json(const nlohmann::json& j, SketchSpec& s);
void to_json(nlohmann::json& j, const Constraint& c);
void from_json(const nlohmann::json& j, Constraint& c);
void to_json(nlohmann::json& j, const StepGrid& g);
void from_json(const nlohmann::json& j, StepGrid& g);
void to_json(nlohmann::json& j, const SolverConfig& c);
void from_json(const nlohmann::json& j, SolverConfig& c);
void to_json(nlohmann::json& j, const DatasetRecipe& r);
void from_json(const nlohmann::json& j, DatasetRecipe& r);
void to_json(nlohmann::json& j, const SolverRecipe& r);
void from_json(const nlohmann::json& j, SolverRecipe& r);
void to_json(nlohmann::json& j, const ExperimentSpec& s);
void from_json(const nlohmann::json& j, ExperimentSpec& s);

std::string to_string(L2Target t);
L2Target l2_target_from_string(const std::string& s);

/// {f_mode, d, r: row-major d*d}.
nlohmann::json preconditioner_to_json(const Preconditioner& p);
Preconditioner preconditioner_from_json(const nlohmann::json& j);
void save_preconditioner(const std::string& path, const Preconditioner& p);
Preconditioner load_preconditioner(const std::string& path);

/// Parses a JSON file; parse errors carry line and column.
nlohmann::json read_json_file(const std::string& path);

}  // namespace pwsgd
