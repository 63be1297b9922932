#pragma once

#include <string_view>
#include <vector>

#include "kschemo/harness/config.hpp"

namespace kschemo::harness {

/// The built-in Figure 2-6 scenarios, in catalog order. Parameters stated in
/// the source text are transcribed as given; alpha = 1 throughout, and
/// domains, grids, horizons and the Figure 4 perturbation are defaults.
const std::vector<ScenarioConfig>& scenario_catalog();

/// Throws ConfigError if no scenario has this name.
const ScenarioConfig& find_scenario(std::string_view name);

}  // namespace kschemo::harness
