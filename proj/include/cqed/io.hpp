#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cqed/circuit_model.hpp"
#include "cqed/scenarios.hpp"

namespace cqed {

// Writes to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);
std::string trajectory_csv(const ScenarioResult& result);
std::string spectrum_csv(const ModeSpectrum& spectrum);

nlohmann::json spectrum_json(const ModeSpectrum& spectrum);
nlohmann::json coupling_json(const CouplingTable& table);

}  // namespace cqed
