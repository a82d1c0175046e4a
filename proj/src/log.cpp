// Copyright 2026 The cxrharmon Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cxrharmon/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace cxrharmon::log {

namespace {

Level g_level = Level::kWarn;
std::once_flag g_env_once;
std::mutex g_write_mutex;

Level level_from_env() {
  const char* raw = std::getenv("CXR_HARMON_LOG");
  if (raw == nullptr) return Level::kWarn;
  const std::string value(raw);
  if (value == "error") return Level::kError;
  if (value == "warn") return Level::kWarn;
  if (value == "info") return Level::kInfo;
  if (value == "debug") return Level::kDebug;
  return Level::kWarn;
}

void emit(Level lvl, const char* tag, std::string_view message) {
  std::call_once(g_env_once, [] { g_level = level_from_env(); });
  if (static_cast<int>(lvl) > static_cast<int>(g_level)) return;
  std::lock_guard<std::mutex> lock(g_write_mutex);
  std::cerr << "[cxrharmon " << tag << "] " << message << "\n";
}

}  // namespace

Level level() {
  std::call_once(g_env_once, [] { g_level = level_from_env(); });
  return g_level;
}

void set_level(Level lvl) {
  std::call_once(g_env_once, [] {});
  g_level = lvl;
}

void error(std::string_view message) { emit(Level::kError, "error", message); }
void warn(std::string_view message) { emit(Level::kWarn, "warn", message); }
void info(std::string_view message) { emit(Level::kInfo, "info", message); }
void debug(std::string_view message) { emit(Level::kDebug, "debug", message); }

}  // namespace cxrharmon::log
