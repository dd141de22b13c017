#pragma once

#include <string>

#include <json.hpp>

#include "omrr/data.hpp"
#include "omrr/lp.hpp"
#include "omrr/model.hpp"

namespace omrr::io {

// On-disk documents are JSON with a format tag; loaders reject unknown tags.
inline constexpr const char* kInstanceFormat = "omrr-instance/1";
inline constexpr const char* kSolutionFormat = "omrr-solution/1";
inline constexpr const char* kModelFormat = "omrr-model/1";

nlohmann::json instance_to_json(const model::InstanceSpec& spec);
model::InstanceSpec instance_from_json(const nlohmann::json& doc);

nlohmann::json solution_to_json(const lp::LpSolution& sol);
lp::LpSolution solution_from_json(const nlohmann::json& doc);

nlohmann::json model_to_json(const data::TrainedModel& model);
data::TrainedModel model_from_json(const nlohmann::json& doc);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& doc);

}  // namespace omrr::io
