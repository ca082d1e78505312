// Copyright 2026 The scesep Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "scesep/io/container.hpp"
#include "scesep/model/model.hpp"
#include "scesep/model/trainer.hpp"

namespace scesep::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Model parameters plus config in an SCEM container. `extra` metadata is
/// stored alongside the config keys.
io::Container to_container(const SeparationModel& model,
                           const std::map<std::string, std::string>& extra = {});
SeparationModel from_container(const io::Container& c);

void save_model(const std::filesystem::path& path, const SeparationModel& model,
                const std::map<std::string, std::string>& extra = {});
/// Throws Format on bad magic, version or missing tensors; Io if unreadable.
SeparationModel load_model(const std::filesystem::path& path);

/// Resumable training state: current and best parameters, Adam moments,
/// epoch counter and the epoch log, in one SCEM container.
void save_train_state(const std::filesystem::path& path, const TrainState& state);
TrainState load_train_state(const std::filesystem::path& path);

}  // namespace scesep::model
