#pragma once

// JSON configuration documents and the on-disk LR stack (manifest + PFM files).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpm/forward_sim.hpp"
#include "fpm/geometry.hpp"
#include "fpm/reconstruction.hpp"

namespace fpm {

using Json = nlohmann::ordered_json;

inline constexpr int kManifestSchemaVersion = 1;

struct SimulationConfig {
  SystemGeometry geometry;
  std::size_t window_rows = 0;
  std::size_t window_cols = 0;
  TruthOptions truth;
  std::optional<std::filesystem::path> amplitude_image;
  std::optional<std::filesystem::path> phase_image;
  std::optional<std::filesystem::path> aberration_image;
  ErrorModelSpec error;
  std::size_t field_margin = 2;
  /// 0 selects upsampling_factor().
  std::size_t upsampling = 0;
  std::uint64_t seed = 0;
  ReconConfig recon;

  std::vector<LedIndex> lit() const;
  std::size_t resolved_upsampling() const;
};

SystemGeometry geometry_from_json(const Json& j);
Json to_json(const SystemGeometry& g);
ReconConfig recon_from_json(const Json& j);
Json to_json(const ReconConfig& c);

/// Relative image paths resolve against base_dir. Unknown keys are rejected.
SimulationConfig simulation_config_from_json(const Json& j, const std::filesystem::path& base_dir);
SimulationConfig load_simulation_config(const std::filesystem::path& path);
/// Every field, defaults included.
Json to_json(const SimulationConfig& c);

/// Loads the source images named by the config and builds the truth.
GroundTruth build_ground_truth(const SimulationConfig& c);
/// Pupil as given in the config (aberration loaded from file if named).
PupilSpec build_pupil(const SimulationConfig& c);

struct ManifestEntry {
  std::string file;
  LedIndex led;
};

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  SystemGeometry geometry;
  std::size_t window_rows = 0;
  std::size_t window_cols = 0;
  std::string pixel_format = "pfm-f32";
  std::vector<ManifestEntry> images;
  /// Whole simulation config when produced by `simulate`; null otherwise.
  Json config;
};

Manifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const std::filesystem::path& dir, const Manifest& m);

LrStack load_stack(const std::filesystem::path& dir);
/// Writes one PFM per image plus manifest.json.
void write_stack(const std::filesystem::path& dir, const LrStack& stack, std::size_t window_rows,
                 std::size_t window_cols, const Json& config);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace fpm
