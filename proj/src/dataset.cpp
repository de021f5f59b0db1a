// dataset.cpp

#include "ocrsynth/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ocrsynth/corpus.hpp"
#include "ocrsynth/error.hpp"
#include "ocrsynth/png_io.hpp"
#include "ocrsynth/resources.hpp"
#include "ocrsynth/tex/layout.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/utf8.hpp"

namespace ocrsynth {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

/// Temp file in the same directory, then rename: readers never see a
/// partially written file.
void write_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct BuildContext {
  const DatasetPlan& plan;
  const tex::FontSet& fonts;
  const Corpus* corpus;
  std::vector<std::size_t> font_pool;
  std::vector<std::size_t> size_pool;
  fs::path root;
};

LatexLabel generate_label(const BuildContext& ctx, LabelKind kind, RandomSource& rng) {
  switch (kind) {
    case LabelKind::English:
      return gen_english_label(*ctx.corpus, ctx.plan.english, rng,
                               [&](char32_t c) { return ctx.fonts.renderable(c); });
    case LabelKind::Chem:
      return gen_chem_label(ctx.plan.chem, rng);
    case LabelKind::Numeric:
      return gen_numeric_label(ctx.plan.numeric, rng);
    case LabelKind::External:
      break;
  }
  throw Error(ErrorKind::Contract, "external records are loaded, not generated");
}

RecordEntry make_record(const BuildContext& ctx, LabelKind kind, std::size_t index) {
  const DatasetPlan& plan = ctx.plan;
  RecordEntry e;
  e.id = record_id(kind, index);
  e.subset = kind;
  e.split = assign_split(e.id, plan.splits, plan.seed);
  e.record_seed = derive_seed(plan.seed, label_kind_name(kind), index);

  for (std::size_t attempt = 0; attempt <= plan.max_retries; ++attempt) {
    const std::uint64_t seed =
        attempt == 0 ? e.record_seed : derive_seed(e.record_seed, "retry", attempt);
    Rng rng(seed);
    const LatexLabel label = generate_label(ctx, kind, rng);
    const std::size_t font_id = rng.pick(ctx.font_pool);
    const std::size_t size_id = rng.pick(ctx.size_pool);
    RasterImage img;
    try {
      img = tex::rasterize(tex::parse_label(label.text), plan.render.style(font_id, size_id),
                           ctx.fonts);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::TextOverflow) continue;
      throw Error(err.kind(), "record " + e.id + ": " + err.what());
    }
    if (plan.transforms_enabled && (!plan.transforms_train_only || e.split == Split::Train)) {
      Rng trng(derive_seed(seed, "transforms", 0));
      PipelineResult r = apply_pipeline(img, plan.transforms, trng);
      img = std::move(r.image);
      e.transforms_applied = std::move(r.applied);
    }
    e.label = label.text;
    e.attempt = attempt;
    e.font_id = font_id;
    e.size_id = size_id;
    e.width = img.width;
    e.height = img.height;
    e.image_path = (fs::path("images") / label_kind_name(kind) / (e.id + ".png")).generic_string();
    const auto png = encode_png(img);
    write_atomic(ctx.root / e.image_path,
                 std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
    return e;
  }
  throw Error(ErrorKind::Generation, "record " + e.id + " (index " + std::to_string(index) +
                                         ") still overflowed the canvas after " +
                                         std::to_string(plan.max_retries) + " retries");
}

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  for (Split s : {Split::Train, Split::Dev, Split::Test}) {
    if (name == split_name(s)) return s;
  }
  throw Error(ErrorKind::Input, "unknown split '" + std::string(name) + "'");
}

std::string record_id(LabelKind subset, std::size_t index) {
  return std::string(label_kind_name(subset)) + "-" + std::to_string(index);
}

Split assign_split(std::string_view id, const SplitRatios& ratios, std::uint64_t master_seed) {
  const std::uint64_t h = hash_combine(mix64(master_seed ^ 0x5b17ULL), hash_bytes(id));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  if (u < ratios.train) return Split::Train;
  if (u < ratios.train + ratios.dev) return Split::Dev;
  // ratios summing to 1 - 1e-9 must not push anything past test
  return ratios.test > 0 || ratios.dev == 0 ? Split::Test : Split::Dev;
}

ojson RecordEntry::to_json() const {
  ojson j;
  j["id"] = id;
  j["subset"] = label_kind_name(subset);
  j["split"] = split_name(split);
  j["image_path"] = image_path;
  j["label"] = label;
  j["record_seed"] = record_seed;
  j["attempt"] = attempt;
  j["font_id"] = font_id ? ojson(*font_id) : ojson(nullptr);
  j["size_id"] = size_id ? ojson(*size_id) : ojson(nullptr);
  j["transforms_applied"] = transforms_applied;
  j["width"] = width;
  j["height"] = height;
  j["excluded_from_eval"] = excluded_from_eval;
  return j;
}

RecordEntry RecordEntry::from_json(const json& j) {
  RecordEntry e;
  try {
    e.id = j.at("id").get<std::string>();
    e.subset = parse_label_kind(j.at("subset").get<std::string>());
    e.split = parse_split(j.at("split").get<std::string>());
    e.image_path = j.at("image_path").get<std::string>();
    e.label = j.at("label").get<std::string>();
    e.record_seed = j.value("record_seed", std::uint64_t{0});
    e.attempt = j.value("attempt", std::size_t{0});
    if (j.contains("font_id") && !j["font_id"].is_null()) e.font_id = j["font_id"].get<std::size_t>();
    if (j.contains("size_id") && !j["size_id"].is_null()) e.size_id = j["size_id"].get<std::size_t>();
    e.transforms_applied = j.value("transforms_applied", std::vector<std::string>{});
    e.width = j.value("width", 0);
    e.height = j.value("height", 0);
    e.excluded_from_eval = j.value("excluded_from_eval", false);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::Input, std::string("malformed manifest entry: ") + ex.what());
  }
  return e;
}

std::string Manifest::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

std::string write_manifest(const Manifest& manifest, const fs::path& root) {
  const std::string body = manifest.to_jsonl();
  write_atomic(root / "manifest.jsonl", body);
  return sha256_hex(body);
}

tex::FontSet load_fonts(const RenderConfig& render) {
  const fs::path font_dir =
      render.font_dir.empty() ? data_dir() / "fonts" : fs::path(render.font_dir);
  return tex::FontSet::load(font_dir, render.fonts, render.fallback_font, render.sizes_pt,
                            render.dpi);
}

BuildResult build_dataset(const DatasetPlan& plan, const BuildOptions& options) {
  plan.validate();
  const fs::path root = plan.output_root;
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) {
    throw Error(ErrorKind::Io, "cannot create output directory " + root.string());
  }

  const tex::FontSet fonts = load_fonts(plan.render);
  std::optional<Corpus> corpus;
  if (plan.counts.english > 0) {
    const fs::path path = plan.corpus.path.empty() ? data_dir() / "corpus" / "sample.txt"
                                                   : fs::path(plan.corpus.path);
    corpus = load_corpus(path, parse_corpus_format(plan.corpus.format));
  }

  std::vector<std::pair<LabelKind, std::size_t>> tasks;
  tasks.reserve(plan.counts.english + plan.counts.chem + plan.counts.numeric);
  for (auto [kind, n] : {std::pair{LabelKind::English, plan.counts.english},
                         std::pair{LabelKind::Chem, plan.counts.chem},
                         std::pair{LabelKind::Numeric, plan.counts.numeric}}) {
    if (n > 0) fs::create_directories(root / "images" / label_kind_name(kind));
    for (std::size_t i = 0; i < n; ++i) tasks.emplace_back(kind, i);
  }

  const BuildContext ctx{plan, fonts, corpus ? &*corpus : nullptr,
                         plan.render.effective_font_pool(), plan.render.effective_size_pool(),
                         root};
  std::vector<RecordEntry> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex mutex;
  std::size_t done = 0;

  auto worker = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = make_record(ctx, tasks[i].first, tasks[i].second);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
        return;
      }
      if (options.progress) {
        std::lock_guard lock(mutex);
        options.progress(++done, tasks.size());
      }
    }
  };
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  BuildResult result;
  result.manifest.plan_fingerprint = plan.fingerprint();
  result.manifest.entries = std::move(results);
  result.manifest.root = root;
  result.manifest_sha256 = write_manifest(result.manifest, root);

  ojson header;
  header["tool_version"] = kToolVersion;
  header["plan_fingerprint"] = result.manifest.plan_fingerprint;
  header["manifest_sha256"] = result.manifest_sha256;
  header["record_count"] = result.manifest.entries.size();
  header["plan"] = plan.to_json();
  write_atomic(root / "plan.json", header.dump(2) + "\n");
  return result;
}

Manifest read_manifest(const fs::path& root) {
  Manifest m;
  m.root = root;
  const fs::path header = root / "plan.json";
  if (fs::exists(header)) {
    try {
      const json h = json::parse(read_text(header));
      m.plan_fingerprint = h.value("plan_fingerprint", "");
      m.tool_version = h.value("tool_version", kToolVersion);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Input, header.string() + " is not valid JSON: " + e.what());
    }
  }
  std::istringstream lines(read_text(root / "manifest.jsonl"));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      m.entries.push_back(RecordEntry::from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Input, "manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return m;
}

DatasetStats compute_stats(const Manifest& manifest) {
  std::map<LabelKind, std::set<char32_t>> chars;
  DatasetStats stats;
  for (const auto& e : manifest.entries) {
    const std::u32string s = utf8::decode(e.label);
    SubsetStats& st = stats[e.subset];
    st.total_characters += s.size();
    st.record_count += 1;
    chars[e.subset].insert(s.begin(), s.end());
  }
  for (auto& [kind, st] : stats) {
    st.unique_characters = chars[kind].size();
    st.avg_characters_per_record =
        st.record_count == 0 ? 0.0
                             : static_cast<double>(st.total_characters) /
                                   static_cast<double>(st.record_count);
  }
  return stats;
}

std::string format_stats_table(const DatasetStats& stats) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "subset" << std::right << std::setw(12) << "records"
      << std::setw(14) << "characters" << std::setw(10) << "unique" << std::setw(12)
      << "avg/record" << "\n";
  for (const auto& [kind, st] : stats) {
    out << std::left << std::setw(10) << label_kind_name(kind) << std::right << std::setw(12)
        << st.record_count << std::setw(14) << st.total_characters << std::setw(10)
        << st.unique_characters << std::setw(12) << std::fixed << std::setprecision(2)
        << st.avg_characters_per_record << "\n";
  }
  return out.str();
}

ojson stats_to_json(const DatasetStats& stats) {
  ojson j = ojson::object();
  for (const auto& [kind, st] : stats) {
    j[label_kind_name(kind)] = {{"record_count", st.record_count},
                                {"total_characters", st.total_characters},
                                {"unique_characters", st.unique_characters},
                                {"avg_characters_per_record", st.avg_characters_per_record}};
  }
  return j;
}

Manifest load_external(const fs::path& images_dir, const fs::path& labels_file,
                       std::string_view subset_tag, const ExternalOptions& options) {
  std::vector<std::pair<std::string, std::string>> rows;  // image name, label
  const std::string text = read_text(labels_file);
  if (const auto bad = utf8::find_invalid(text); bad != std::string::npos) {
    throw Error(ErrorKind::Input, labels_file.string() + ": invalid UTF-8 at byte offset " +
                                      std::to_string(bad));
  }
  const bool jsonl = labels_file.extension() == ".jsonl";
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (jsonl) {
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        rows.emplace_back(j.at("image").get<std::string>(), j.at("label").get<std::string>());
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Input, labels_file.string() + " line " +
                                          std::to_string(lineno + 1) + ": " + e.what());
      }
    } else {
      rows.emplace_back(std::to_string(lineno) + ".png", line);
    }
    ++lineno;
  }
  // a trailing newline does not make an extra empty label
  while (!jsonl && !rows.empty() && rows.back().second.empty()) rows.pop_back();

  std::size_t png_count = 0;
  if (fs::is_directory(images_dir)) {
    for (const auto& f : fs::directory_iterator(images_dir)) {
      png_count += f.is_regular_file() && f.path().extension() == ".png" ? 1 : 0;
    }
  } else {
    throw Error(ErrorKind::Io, images_dir.string() + " is not a directory");
  }

  Manifest m;
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const fs::path image = fs::absolute(images_dir / rows[i].first);
    const std::string id = std::string(subset_tag) + "-" + std::to_string(i);
    if (!fs::is_regular_file(image)) {
      missing.push_back(id + " (" + rows[i].first + ")");
      continue;
    }
    if (rows[i].second.empty()) {
      throw Error(ErrorKind::Input, labels_file.string() + ": label for " + id + " is empty");
    }
    RecordEntry e;
    e.id = id;
    e.subset = LabelKind::External;
    e.split = options.split;
    e.image_path = image.lexically_normal().generic_string();
    e.label = rows[i].second;
    std::tie(e.width, e.height) = png_dimensions(image);
    e.excluded_from_eval = e.width > options.max_width;
    m.entries.push_back(std::move(e));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw Error(ErrorKind::Input, "missing images for labels: " + list);
  }
  if (png_count != rows.size()) {
    throw Error(ErrorKind::Input, std::to_string(rows.size()) + " labels but " +
                                      std::to_string(png_count) + " images in " +
                                      images_dir.string());
  }
  return m;
}

Manifest merge_manifests(const Manifest& a, const Manifest& b, std::string_view tag_a,
                         std::string_view tag_b) {
  if (tag_a == tag_b) throw Error(ErrorKind::Contract, "merge tags must differ");
  Manifest out;
  out.plan_fingerprint = sha256_hex(a.plan_fingerprint + "+" + b.plan_fingerprint);
  for (const auto& [m, tag] : {std::pair{&a, tag_a}, std::pair{&b, tag_b}}) {
    for (RecordEntry e : m->entries) {
      e.id = std::string(tag) + "/" + e.id;
      const fs::path p(e.image_path);
      if (p.is_relative() && !m->root.empty()) {
        e.image_path = fs::absolute(m->root / p).lexically_normal().generic_string();
      }
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace ocrsynth
