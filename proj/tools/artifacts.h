/*
 * Copyright 2026 The pairlens Authors.
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

#ifndef PAIRLENS_TOOLS_ARTIFACTS_H_
#define PAIRLENS_TOOLS_ARTIFACTS_H_

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace pairlens::cli {

std::string Sha256Hex(const std::string& bytes);
std::string FileSha256(const std::filesystem::path& path);

// A write-once run directory. Artifacts are staged in a hidden sibling and
// the directory appears under its final name only on Commit(), so a failed
// run leaves nothing behind. An existing target is never touched.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path target);
  ~RunDirectory();
  RunDirectory(const RunDirectory&) = delete;
  RunDirectory& operator=(const RunDirectory&) = delete;

  void Write(const std::string& name, const std::string& bytes);
  void WriteJson(const std::string& name, const nlohmann::json& json);

  // name -> sha256 of everything written so far.
  const std::map<std::string, std::string>& hashes() const { return hashes_; }

  // Writes manifest.json (not itself hashed) and publishes the directory.
  void Commit(const nlohmann::json& manifest);

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  std::map<std::string, std::string> hashes_;
  bool committed_ = false;
};

}  // namespace pairlens::cli

#endif  // PAIRLENS_TOOLS_ARTIFACTS_H_
