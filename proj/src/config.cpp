// config.cpp

#include "ocrsynth/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ocrsynth/corpus.hpp"
#include "ocrsynth/error.hpp"

namespace ocrsynth {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::vector<std::size_t> iota_vector(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

/// Overlays `user` onto `base`, refusing keys the base does not have.
void overlay(ojson& base, const json& user, const std::string& prefix) {
  if (!user.is_object()) {
    throw Error(ErrorKind::Config,
                (prefix.empty() ? std::string("plan") : prefix) + " must be a JSON object");
  }
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw Error(ErrorKind::Config, "unknown config key '" + path + "'");
    ojson& slot = base[key];
    if (slot.is_object()) {
      overlay(slot, value, path);
    } else {
      slot = value;
    }
  }
}

template <typename T>
T field(const ojson& j, const char* section, const char* key) {
  const ojson& s = section ? j.at(section) : j;
  try {
    return s.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Config, std::string("config key '") + (section ? section : "") +
                                       (section ? "." : "") + key + "' has the wrong type");
  }
}

void flatten(const ojson& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, path, out);
    } else {
      out.emplace_back(path, value.dump());
    }
  }
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

void SplitRatios::validate() const {
  if (train < 0 || dev < 0 || test < 0 || std::abs(train + dev + test - 1.0) > 1e-9) {
    throw Error(ErrorKind::Config, "split ratios must be non-negative and sum to 1");
  }
}

tex::RenderStyle RenderConfig::style(std::size_t font_id, std::size_t size_id) const {
  tex::RenderStyle s;
  s.font_id = font_id;
  s.size_id = size_id;
  s.script_scale = script_scale;
  s.script_shift = script_shift;
  s.canvas_height = canvas_height;
  s.canvas_width = canvas_width;
  s.margin = margin;
  return s;
}

std::vector<std::size_t> RenderConfig::effective_font_pool() const {
  return font_pool.empty() ? iota_vector(fonts.size()) : font_pool;
}

std::vector<std::size_t> RenderConfig::effective_size_pool() const {
  return size_pool.empty() ? iota_vector(sizes_pt.size()) : size_pool;
}

void RenderConfig::validate() const {
  if (fonts.empty()) throw Error(ErrorKind::Config, "render.fonts must not be empty");
  if (sizes_pt.empty()) throw Error(ErrorKind::Config, "render.sizes_pt must not be empty");
  for (double s : sizes_pt) {
    if (!(s > 0)) throw Error(ErrorKind::Config, "render.sizes_pt must be positive");
  }
  if (!(dpi > 0)) throw Error(ErrorKind::Config, "render.dpi must be positive");
  for (std::size_t f : font_pool) {
    if (f >= fonts.size()) throw Error(ErrorKind::Config, "render.font_pool index out of range");
  }
  for (std::size_t s : size_pool) {
    if (s >= sizes_pt.size()) throw Error(ErrorKind::Config, "render.size_pool index out of range");
  }
  if (margin < 0) throw Error(ErrorKind::Config, "render.margin must be >= 0");
  try {
    tex::validate(style(0, 0));
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("render: ") + e.what());
  }
}

void DatasetPlan::validate() const {
  if (max_retries < 1) throw Error(ErrorKind::Config, "max_retries must be >= 1");
  splits.validate();
  parse_corpus_format(corpus.format);
  english.validate();
  chem.validate();
  numeric.validate();
  render.validate();
  transforms.validate();
  if (external_max_width < 1) throw Error(ErrorKind::Config, "external.max_width must be >= 1");
}

ojson DatasetPlan::to_json() const {
  ojson j;
  j["seed"] = seed;
  j["output_root"] = output_root;
  j["max_retries"] = max_retries;
  j["counts"] = {{"english", counts.english}, {"chem", counts.chem}, {"numeric", counts.numeric}};
  j["splits"] = {{"train", splits.train}, {"dev", splits.dev}, {"test", splits.test}};
  j["corpus"] = {{"path", corpus.path}, {"format", corpus.format}};
  ojson e;
  e["w"] = english.w;
  e["p1"] = english.p1;
  e["p2"] = english.p2;
  e["p3"] = english.p3;
  e["p4"] = english.p4;
  e["max_breaks"] = english.max_breaks;
  e["arg_english_prob"] = english.arg_english_prob;
  e["symbol_inventory"] = english.symbol_inventory;
  e["arg_command_inventory"] = english.arg_command_inventory;
  e["trial_mode"] = trial_mode_name(english.trial_mode);
  e["length_weighted"] = english.length_weighted;
  j["english"] = e;
  ojson c;
  c["max_compounds"] = chem.max_compounds;
  c["max_elements"] = chem.max_elements;
  c["max_quantity"] = chem.max_quantity;
  c["conjoiners"] = chem.conjoiners;
  c["element_symbols"] = chem.element_symbols;
  c["upright_compounds"] = chem.upright_compounds;
  j["chem"] = c;
  ojson n;
  n["max_numerals"] = numeric.max_numerals;
  n["decimal_prob"] = numeric.decimal_prob;
  n["decimal_max"] = numeric.decimal_max;
  n["joiners"] = numeric.joiners;
  n["math_symbol_inventory"] = numeric.math_symbol_inventory;
  j["numeric"] = n;
  ojson r;
  r["fonts"] = render.fonts;
  r["fallback_font"] = render.fallback_font;
  r["font_dir"] = render.font_dir;
  r["sizes_pt"] = render.sizes_pt;
  r["dpi"] = render.dpi;
  r["font_pool"] = render.font_pool;
  r["size_pool"] = render.size_pool;
  r["script_scale"] = render.script_scale;
  r["script_shift"] = render.script_shift;
  r["canvas_height"] = render.canvas_height;
  r["canvas_width"] = render.canvas_width;
  r["margin"] = render.margin;
  j["render"] = r;
  ojson t;
  t["enabled"] = transforms_enabled;
  t["train_only"] = transforms_train_only;
  t["pixelate_factor_range"] = {transforms.pixelate_low, transforms.pixelate_high};
  t["bold_n"] = transforms.bold_n;
  t["binarize_threshold"] = transforms.binarize_threshold;
  t["pad_max"] = transforms.pad_max;
  t["p_bold"] = transforms.p_bold;
  t["p_pixelate"] = transforms.p_pixelate;
  t["p_pad"] = transforms.p_pad;
  j["transforms"] = t;
  j["external"] = {{"max_width", external_max_width}};
  return j;
}

DatasetPlan DatasetPlan::from_json(const json& user) {
  ojson j = DatasetPlan{}.to_json();
  overlay(j, user, "");
  DatasetPlan p;
  p.seed = field<std::uint64_t>(j, nullptr, "seed");
  p.output_root = field<std::string>(j, nullptr, "output_root");
  p.max_retries = field<std::size_t>(j, nullptr, "max_retries");
  p.counts.english = field<std::size_t>(j, "counts", "english");
  p.counts.chem = field<std::size_t>(j, "counts", "chem");
  p.counts.numeric = field<std::size_t>(j, "counts", "numeric");
  p.splits.train = field<double>(j, "splits", "train");
  p.splits.dev = field<double>(j, "splits", "dev");
  p.splits.test = field<double>(j, "splits", "test");
  p.corpus.path = field<std::string>(j, "corpus", "path");
  p.corpus.format = field<std::string>(j, "corpus", "format");

  auto& e = p.english;
  e.w = field<std::size_t>(j, "english", "w");
  e.p1 = field<double>(j, "english", "p1");
  e.p2 = field<double>(j, "english", "p2");
  e.p3 = field<double>(j, "english", "p3");
  e.p4 = field<double>(j, "english", "p4");
  e.max_breaks = field<std::size_t>(j, "english", "max_breaks");
  e.arg_english_prob = field<double>(j, "english", "arg_english_prob");
  e.symbol_inventory = field<std::vector<std::string>>(j, "english", "symbol_inventory");
  e.arg_command_inventory = field<std::vector<std::string>>(j, "english", "arg_command_inventory");
  e.trial_mode = parse_trial_mode(field<std::string>(j, "english", "trial_mode"));
  e.length_weighted = field<bool>(j, "english", "length_weighted");

  auto& c = p.chem;
  c.max_compounds = field<std::size_t>(j, "chem", "max_compounds");
  c.max_elements = field<std::size_t>(j, "chem", "max_elements");
  c.max_quantity = field<std::size_t>(j, "chem", "max_quantity");
  c.conjoiners = field<std::vector<std::string>>(j, "chem", "conjoiners");
  c.element_symbols = field<std::vector<std::string>>(j, "chem", "element_symbols");
  c.upright_compounds = field<bool>(j, "chem", "upright_compounds");

  auto& n = p.numeric;
  n.max_numerals = field<std::size_t>(j, "numeric", "max_numerals");
  n.decimal_prob = field<double>(j, "numeric", "decimal_prob");
  n.decimal_max = field<double>(j, "numeric", "decimal_max");
  n.joiners = field<std::vector<std::string>>(j, "numeric", "joiners");
  n.math_symbol_inventory = field<std::vector<std::string>>(j, "numeric", "math_symbol_inventory");

  auto& r = p.render;
  r.fonts = field<std::vector<std::string>>(j, "render", "fonts");
  r.fallback_font = field<std::string>(j, "render", "fallback_font");
  r.font_dir = field<std::string>(j, "render", "font_dir");
  r.sizes_pt = field<std::vector<double>>(j, "render", "sizes_pt");
  r.dpi = field<double>(j, "render", "dpi");
  r.font_pool = field<std::vector<std::size_t>>(j, "render", "font_pool");
  r.size_pool = field<std::vector<std::size_t>>(j, "render", "size_pool");
  r.script_scale = field<double>(j, "render", "script_scale");
  r.script_shift = field<double>(j, "render", "script_shift");
  r.canvas_height = field<int>(j, "render", "canvas_height");
  r.canvas_width = field<int>(j, "render", "canvas_width");
  r.margin = field<int>(j, "render", "margin");

  p.transforms_enabled = field<bool>(j, "transforms", "enabled");
  p.transforms_train_only = field<bool>(j, "transforms", "train_only");
  const auto range = field<std::vector<double>>(j, "transforms", "pixelate_factor_range");
  if (range.size() != 2) {
    throw Error(ErrorKind::Config, "transforms.pixelate_factor_range must be [low, high]");
  }
  p.transforms.pixelate_low = range[0];
  p.transforms.pixelate_high = range[1];
  p.transforms.bold_n = field<int>(j, "transforms", "bold_n");
  const int threshold = field<int>(j, "transforms", "binarize_threshold");
  if (threshold < 0 || threshold > 255) {
    throw Error(ErrorKind::Config, "transforms.binarize_threshold must be in [0, 255]");
  }
  p.transforms.binarize_threshold = static_cast<std::uint8_t>(threshold);
  p.transforms.pad_max = field<int>(j, "transforms", "pad_max");
  p.transforms.p_bold = field<double>(j, "transforms", "p_bold");
  p.transforms.p_pixelate = field<double>(j, "transforms", "p_pixelate");
  p.transforms.p_pad = field<double>(j, "transforms", "p_pad");
  p.external_max_width = field<int>(j, "external", "max_width");
  p.validate();
  return p;
}

DatasetPlan DatasetPlan::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

std::string DatasetPlan::fingerprint() const {
  ojson j = to_json();
  j.erase("output_root");
  return sha256_hex(j.dump());
}

void apply_override(json& plan_json, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorKind::Config,
                "override must look like key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  // validate the path against the defaults, then write into the user json
  const ojson defaults = DatasetPlan{}.to_json();
  const ojson* probe = &defaults;
  json* slot = &plan_json;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!probe->is_object() || !probe->contains(part)) {
      throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
    }
    probe = &(*probe)[part];
    if (!slot->is_object()) *slot = json::object();
    slot = &(*slot)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (probe->is_object()) {
    throw Error(ErrorKind::Config, "'" + key + "' is a section, not a key");
  }
  *slot = value;
}

std::vector<std::pair<std::string, std::string>> config_keys_with_defaults() {
  std::vector<std::pair<std::string, std::string>> out;
  flatten(DatasetPlan{}.to_json(), "", out);
  return out;
}

}  // namespace ocrsynth
