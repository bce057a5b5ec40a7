#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cembed/covmodels.hpp"

namespace cembed {

// {"variant": "<Name>", "params": {...}}. Field names match the struct members;
// complex numbers are [re, im]. Unknown variants or fields are DomainErrors.
CovarianceModel model_from_json(const nlohmann::json& j);
RealCovariance real_model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const CovarianceModel& model);
nlohmann::json real_model_to_json(const RealCovariance& model);

CovarianceModel parse_model(const std::string& text);
// IoError if the file cannot be read.
CovarianceModel load_model(const std::string& path);

}  // namespace cembed
