/*
 * Copyright 2026 The xgx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Shared fixtures for the test binaries. The fixture corpus is parsed once
// per process and the reference models are trained lazily on its training
// split with default configurations.

#ifndef XGX_TESTS_TEST_SUPPORT_H_
#define XGX_TESTS_TEST_SUPPORT_H_

#include <string>
#include <vector>

#include "xgx/event_data.h"
#include "xgx/shapley.h"
#include "xgx/xg_model.h"

namespace xgx::testing {

std::string DataPath(const std::string& name);
std::string CliPath();

const std::vector<ShotEvent>& FixtureEvents();
// Encoding built from every fixture row with the default threshold.
const EncodedDataset& FixtureData();
const SplitIndices& FixtureSplit();
const GbtModel& FixtureGbt();
const LogisticModel& FixtureLogistic();
// B = 100 rows from the training split, seed 42.
const BackgroundSet& FixtureBackground();

// Makes a valid event with neutral defaults.
ShotEvent MakeEvent(const std::string& match_id = "m1",
                    const std::string& player = "P",
                    const std::string& team = "A",
                    const std::string& opponent = "B");

// Runs `command` through the shell; returns the exit status and captures
// stdout into `out` when given.
int RunCommand(const std::string& command, std::string* out = nullptr);

std::string ReadFile(const std::string& path);

// Fresh empty directory under the system temp dir.
std::string MakeTempDir(const std::string& tag);

}  // namespace xgx::testing

#endif  // XGX_TESTS_TEST_SUPPORT_H_
