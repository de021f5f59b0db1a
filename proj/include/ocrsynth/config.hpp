// config.hpp - the declarative dataset plan and its JSON form.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ocrsynth/labelgen.hpp"
#include "ocrsynth/tex/layout.hpp"
#include "ocrsynth/transforms.hpp"

namespace ocrsynth {

inline constexpr const char* kToolVersion = "ocrsynth 0.1.0";

struct SplitRatios {
  double train = 0.9;
  double dev = 0.05;
  double test = 0.05;

  /// Non-negative and summing to 1 within 1e-9; throws Error(Config).
  void validate() const;
};

struct CorpusConfig {
  std::string path;  // empty: bundled sample corpus
  std::string format = "lines";
};

struct RenderConfig {
  std::vector<std::string> fonts = tex::default_font_files();
  std::string fallback_font = tex::default_fallback_font_file();
  std::string font_dir;  // empty: <data_dir>/fonts
  std::vector<double> sizes_pt = tex::default_sizes_pt();
  double dpi = tex::kDefaultDpi;
  std::vector<std::size_t> font_pool;  // empty: every font
  std::vector<std::size_t> size_pool;  // empty: every size
  double script_scale = 0.7;
  double script_shift = 0.35;
  int canvas_height = 160;
  int canvas_width = 600;
  int margin = 4;

  tex::RenderStyle style(std::size_t font_id, std::size_t size_id) const;
  std::vector<std::size_t> effective_font_pool() const;
  std::vector<std::size_t> effective_size_pool() const;
  void validate() const;
};

struct Counts {
  std::size_t english = 1000000;
  std::size_t chem = 100000;
  std::size_t numeric = 100000;
};

/// Everything a build depends on. Two builds of equal plans produce
/// identical manifests and images regardless of worker count.
struct DatasetPlan {
  std::uint64_t seed = 0;
  std::string output_root = "dataset";
  std::size_t max_retries = 64;
  Counts counts;
  SplitRatios splits;
  CorpusConfig corpus;
  EnglishGenConfig english;
  ChemGenConfig chem;
  NumericGenConfig numeric;
  RenderConfig render;
  bool transforms_enabled = true;
  bool transforms_train_only = true;
  TransformConfig transforms;
  int external_max_width = 700;

  void validate() const;

  nlohmann::ordered_json to_json() const;
  /// Keys missing from `j` keep their defaults; unknown keys are errors.
  static DatasetPlan from_json(const nlohmann::json& j);
  static DatasetPlan load(const std::string& path);

  /// SHA-256 of the canonical JSON, excluding output_root.
  std::string fingerprint() const;
};

/// Applies "section.key=value"; the value is parsed as JSON when possible,
/// else taken as a string. Throws Error(Config) for unknown keys.
void apply_override(nlohmann::json& plan_json, std::string_view assignment);

/// Every leaf key of the default plan with its default value rendered as
/// JSON, in declaration order.
std::vector<std::pair<std::string, std::string>> config_keys_with_defaults();

/// Lower-case hex SHA-256 (OpenSSL).
std::string sha256_hex(std::string_view bytes);

}  // namespace ocrsynth
