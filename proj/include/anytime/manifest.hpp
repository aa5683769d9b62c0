#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anytime/control.hpp"

namespace anytime {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

// FNV-1a 64 over the file bytes. Not cryptographic: it pins outputs for
// rerun-equality checks without pulling in a hash dependency.
std::uint64_t file_checksum(const std::filesystem::path& path);

// Every run that writes files also writes one of these next to them, so a
// rerun can be diffed by checksum instead of byte-by-byte.
struct RunManifest {
  std::string command;
  std::string config;  // effective configuration, echoed verbatim
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;

  void add_output(const std::filesystem::path& path);
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

// Config rejection with the JSON path of the offending value ("/plant/a[0]").
struct SchemaError : std::runtime_error {
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), json_path(path) {}
  std::string json_path;
};

// JSON -> SimConfig, throwing SchemaError on shape, type or value problems.
SimConfig parse_sim_config(const std::string& text);

struct SweepSpec {
  SimConfig sim;
  std::size_t codes = 0;
  MetricKind metric = MetricKind::SupMeanX;
};

// Same schema plus required "codes" and "metric" fields.
SweepSpec parse_sweep_config(const std::string& text);

}  // namespace anytime
