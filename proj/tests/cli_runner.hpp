/*
 * Copyright 2026 The pmallows Authors.
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
#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "scratch.hpp"

namespace cli {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with shell-quoted args; stdout and stderr are merged.
inline Result run(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string("'") + PMALLOWS_CLI + "' " + args + " > '" +
                          log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = scratch::slurp(log);
  return r;
}

inline std::string q(const std::filesystem::path& p) {
  return "'" + p.string() + "'";
}

}  // namespace cli
