#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "lava/corruption.hpp"
#include "lava/detection.hpp"
#include "lava/hybrid_cost.hpp"
#include "lava/transport.hpp"
#include "lava/valuation.hpp"

namespace lava {

nlohmann::json to_json(const TransportSolution& sol);
nlohmann::json to_json(const LabelDistanceTable& table);
nlohmann::json to_json(const ValuationReport& report);
nlohmann::json to_json(const CorruptionRecord& record);
nlohmann::json to_json(const DatasetManifest& manifest);
nlohmann::json to_json(const DetectionCurve& curve);

CorruptionRecord corruption_record_from_json(const nlohmann::json& j);

/// `index,value,calibrated_gradient,rank` rows sorted by rank.
std::string values_csv(const ValuationReport& report);

/// `budget,rate` rows.
std::string curve_csv(const DetectionCurve& curve);

/// `budget,distance` rows.
std::string distance_curve_csv(const std::vector<std::size_t>& budgets,
                               const std::vector<double>& distances);

/// Dense transport plan; refuses plans that were not stored.
std::string plan_csv(const TransportSolution& sol);

void write_text(const std::filesystem::path& path, const std::string& body);
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace lava
