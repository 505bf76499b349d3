#pragma once

#include <filesystem>

#include <json.hpp>

#include "cdcop/swarm.hpp"

namespace cdcop {

/// Keys: particles, c1, c2, inertia{type, w | w_max, w_min | phi}, max_sc,
/// max_fc, t_max, crossover, seed.
nlohmann::json swarm_config_to_json(const SwarmConfig& cfg);

/// Overlays keys present in `doc` onto `base`; unknown keys are rejected.
SwarmConfig swarm_config_from_json(const nlohmann::json& doc, SwarmConfig base = {});

SwarmConfig load_swarm_config(const std::filesystem::path& path, SwarmConfig base = {});

}  // namespace cdcop
