#include "levyfluct/model_json.hpp"

#include <fstream>
#include <stdexcept>

namespace levyfluct {

LevyModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model: expected a JSON object");
  const double drift = j.at("drift").get<double>();
  const double sigma = j.at("sigma").get<double>();
  if (!j.contains("jumps")) return LevyModel(drift, sigma, NoJumps{});
  const auto& jumps = j.at("jumps");
  const auto type = jumps.at("type").get<std::string>();
  if (type == "none") return LevyModel(drift, sigma, NoJumps{});
  if (type == "cp_exp") {
    return LevyModel(drift, sigma,
                     CompoundPoissonExp{jumps.at("rate").get<double>(), jumps.at("eta").get<double>()});
  }
  throw std::invalid_argument("model: unknown jump type '" + type + "'");
}

nlohmann::json model_to_json(const LevyModel& model) {
  nlohmann::json j;
  j["drift"] = model.drift();
  j["sigma"] = model.gaussian();
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.jumps())) {
    j["jumps"] = {{"type", "cp_exp"}, {"rate", cp->rate}, {"eta", cp->eta}};
  } else {
    j["jumps"] = {{"type", "none"}};
  }
  return j;
}

LevyModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open model file " + file.string());
  return model_from_json(nlohmann::json::parse(in));
}

}  // namespace levyfluct
