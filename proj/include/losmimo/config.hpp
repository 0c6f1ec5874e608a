// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "losmimo/harness.hpp"

namespace losmimo {

// JSON configuration with sections experiment, geometry, oscillator, sweep
// and output. experiment.kind selects a preset whose values the remaining
// keys override; kind "custom" starts from an empty sweep. Unknown keys are
// rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);

// "4" -> 4 pilots, "N" -> N pilots, "N/2" -> N/2 pilots.
PilotSpec parse_pilot_spec(std::string_view text);

// Fully explicit JSON document; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace losmimo
