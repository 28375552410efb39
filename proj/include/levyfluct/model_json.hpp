#pragma once

#include <filesystem>

#include "json.hpp"
#include "levyfluct/levy_model.hpp"

namespace levyfluct {

// {"drift": f, "sigma": f, "jumps": {"type": "none"} | {"type": "cp_exp", "rate": f, "eta": f}}
LevyModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LevyModel& model);
LevyModel load_model(const std::filesystem::path& file);

}  // namespace levyfluct
