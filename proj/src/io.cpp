// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/io.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "floquet/error.hpp"

namespace floquet {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string ArtifactMeta::summary() const {
  std::string tol;
  for (const auto& [key, value] : tolerances.items()) {
    if (!tol.empty()) tol += ';';
    tol += key + "=" + (value.is_number() ? format_double(value.get<double>()) : value.dump());
  }
  return fmt::format("config_sha256={} tolerances={}", config_sha256, tol);
}

Json ArtifactMeta::to_json() const { return Json{{"config_sha256", config_sha256}, {"tolerances", tolerances}}; }

CsvTable::CsvTable(ArtifactMeta meta, std::vector<std::string> columns)
    : meta_(std::move(meta)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) {
    throw Error(fmt::format("CSV row has {} values for {} columns", values.size(), columns_.size()));
  }
  rows_.push_back(values);
}

std::string CsvTable::str() const {
  std::string out = "# " + meta_.summary() + "\n";
  out += fmt::format("{}\n", fmt::join(columns_, ","));
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string json_artifact(Json body, const ArtifactMeta& meta) {
  body["meta"] = meta.to_json();
  return body.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace floquet
