// dataset.hpp - building, reading and combining record manifests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ocrsynth/config.hpp"
#include "ocrsynth/labelgen.hpp"

namespace ocrsynth {

enum class Split { Train, Dev, Test };

const char* split_name(Split s);
Split parse_split(std::string_view name);

struct RecordEntry {
  std::string id;
  LabelKind subset = LabelKind::English;
  Split split = Split::Train;
  std::string image_path;  // relative to the manifest root unless absolute
  std::string label;
  std::uint64_t record_seed = 0;
  std::size_t attempt = 0;  // overflow retries used
  std::optional<std::size_t> font_id;
  std::optional<std::size_t> size_id;
  std::vector<std::string> transforms_applied;
  int width = 0;
  int height = 0;
  bool excluded_from_eval = false;

  nlohmann::ordered_json to_json() const;
  static RecordEntry from_json(const nlohmann::json& j);
};

struct Manifest {
  std::string plan_fingerprint;
  std::string tool_version = kToolVersion;
  std::vector<RecordEntry> entries;
  std::filesystem::path root;  // directory image paths are relative to

  /// One JSON object per line, in entry order.
  std::string to_jsonl() const;
};

/// stable_hash(master_seed, record_id) mapped to [0, 1), then cut at the
/// cumulative ratios.
Split assign_split(std::string_view record_id, const SplitRatios& ratios,
                   std::uint64_t master_seed);

/// "<subset>-<index>"
std::string record_id(LabelKind subset, std::size_t index);

/// Fonts named by the render config (font_dir empty: bundled fonts).
tex::FontSet load_fonts(const RenderConfig& render);

struct BuildOptions {
  unsigned jobs = 1;
  /// Called with (records done, records total); serialized across workers.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct BuildResult {
  Manifest manifest;
  std::string manifest_sha256;
};

/// Generates, renders and writes every record of the plan under
/// plan.output_root: images/<subset>/<id>.png, manifest.jsonl, plan.json.
/// The manifest and header are written last, atomically.
BuildResult build_dataset(const DatasetPlan& plan, const BuildOptions& options = {});

/// Reads <root>/manifest.jsonl (and plan.json when present).
Manifest read_manifest(const std::filesystem::path& root);

struct SubsetStats {
  std::size_t total_characters = 0;
  std::size_t unique_characters = 0;
  double avg_characters_per_record = 0;
  std::size_t record_count = 0;
};

using DatasetStats = std::map<LabelKind, SubsetStats>;

DatasetStats compute_stats(const Manifest& manifest);
std::string format_stats_table(const DatasetStats& stats);
nlohmann::ordered_json stats_to_json(const DatasetStats& stats);

struct ExternalOptions {
  int max_width = 700;
  Split split = Split::Test;
};

/// labels_file is either plain text (one label per line, image
/// "<line-number>.png", 0-based) or JSONL with {"image": ..., "label": ...}.
/// Image paths in the result are absolute.
Manifest load_external(const std::filesystem::path& images_dir,
                       const std::filesystem::path& labels_file,
                       std::string_view subset_tag = "external",
                       const ExternalOptions& options = {});

/// Union with ids prefixed "<tag>/"; image paths are resolved against each
/// manifest's root so the result is self-contained.
Manifest merge_manifests(const Manifest& a, const Manifest& b, std::string_view tag_a = "a",
                         std::string_view tag_b = "b");

/// Writes manifest.jsonl under root atomically; returns its SHA-256.
std::string write_manifest(const Manifest& manifest, const std::filesystem::path& root);

}  // namespace ocrsynth
