// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace floquet {

using Json = nlohmann::json;

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// 17 significant digits: round-trips every double and keeps artifacts
/// byte-stable.
std::string format_double(double v);

/// Provenance stamped on every artifact.
struct ArtifactMeta {
  std::string config_sha256;
  Json tolerances = Json::object();

  /// "config_sha256=<hex> tolerances=<k>=<v>;..." with keys sorted.
  std::string summary() const;
  Json to_json() const;
};

/// In-memory CSV table: one comment line with the provenance, a header line,
/// then rows of 17-digit floats. Lines end in '\n'.
class CsvTable {
 public:
  CsvTable(ArtifactMeta meta, std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  ArtifactMeta meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Pretty-printed JSON with sorted keys and the provenance under "meta".
std::string json_artifact(Json body, const ArtifactMeta& meta);

/// Writes bytes verbatim (binary mode) and throws floquet::Error on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace floquet
