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

#include "artifacts.h"

#include <openssl/evp.h>
#include <unistd.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <system_error>

#include "pairlens/errors.h"

namespace pairlens::cli {

namespace fs = std::filesystem;

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xf]);
  }
  return hex;
}

std::string FileSha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return Sha256Hex(bytes);
}

RunDirectory::RunDirectory(fs::path target) : target_(std::move(target)) {
  if (target_.empty()) throw InvalidArgumentError("--out is required");
  if (fs::exists(target_)) {
    throw IoError("output directory " + target_.string() +
                  " already exists; runs are write-once, pick a new --out");
  }
  const fs::path parent =
      target_.has_parent_path() ? target_.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(parent, ec);
  staging_ = parent / ("." + target_.filename().string() + ".staging-" +
                       std::to_string(::getpid()));
  fs::remove_all(staging_, ec);
  if (!fs::create_directory(staging_, ec)) {
    throw IoError("cannot create staging directory " + staging_.string() + ": " +
                  ec.message());
  }
}

RunDirectory::~RunDirectory() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void RunDirectory::Write(const std::string& name, const std::string& bytes) {
  if (hashes_.count(name) != 0) {
    throw IoError("artifact " + name + " written twice");
  }
  std::ofstream out(staging_ / name, std::ios::binary);
  out << bytes;
  out.close();
  if (!out) throw IoError("cannot write artifact " + name);
  hashes_[name] = Sha256Hex(bytes);
}

void RunDirectory::WriteJson(const std::string& name, const nlohmann::json& json) {
  Write(name, json.dump(2) + "\n");
}

void RunDirectory::Commit(const nlohmann::json& manifest) {
  {
    std::ofstream out(staging_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("cannot write manifest.json");
  }
  std::error_code ec;
  fs::rename(staging_, target_, ec);
  if (ec) {
    throw IoError("cannot publish " + target_.string() + ": " + ec.message());
  }
  committed_ = true;
}

}  // namespace pairlens::cli
