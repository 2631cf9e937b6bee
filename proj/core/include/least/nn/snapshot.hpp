#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>

#include "least/nn/adam.hpp"
#include "least/nn/mlp.hpp"

// JSON snapshots of networks and optimizer state. See docs/formats.md for the
// schema: a layer-dims header followed by row-major weight and bias arrays.
namespace least::nn {

nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdamState& state);
AdamState adam_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace least::nn
