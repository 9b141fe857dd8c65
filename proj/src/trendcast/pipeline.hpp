// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace trendcast {

/// Runs one pipeline command against a JSON run configuration. Commands:
/// synth, discover, trajectories, forecast, evaluate, dynamics, attributes,
/// report, sweep-k. Artifacts land under the configured "out" directory.
/// Throws Error on failure; warnings go to stderr.
void run_command(const std::string& command, const std::string& config_json);

}  // namespace trendcast
