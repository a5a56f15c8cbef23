#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "hwd/metrics.hpp"
#include "hwd/verify.hpp"

namespace hwd {

using Json = nlohmann::ordered_json;

Json to_json(const ScoreReport& report);
Json to_json(const StabilityTable& table);
Json to_json(const PairDistributions& d);

// `size, name, mean, p25, p75` rows.
std::string stability_csv(const StabilityTable& table);
// `level, name, mean, p25, p75` rows; a single score fills all three columns.
std::string alteration_csv(const std::vector<AlterationRow>& rows, const std::vector<Pipeline>& pipelines);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hwd
