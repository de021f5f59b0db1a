// cli.cpp - subcommands are thin wrappers over the library operations.

#include "ocrsynth/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocrsynth/config.hpp"
#include "ocrsynth/dataset.hpp"
#include "ocrsynth/error.hpp"
#include "ocrsynth/metrics.hpp"
#include "ocrsynth/png_io.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/transforms.hpp"

namespace ocrsynth {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void error_line(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump(-1, ' ', false,
                                                          json::error_handler_t::replace)
      << '\n';
}

std::string config_key_listing() {
  std::ostringstream os;
  os << "Config keys (--config file.json, or --set key=value):\n";
  for (const auto& [key, value] : config_keys_with_defaults()) {
    os << "  " << key << " = " << value << '\n';
  }
  return os.str();
}

// Options shared by subcommands that read a plan.
struct PlanOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "plan file (JSON)");
    cmd->add_option("--set", overrides, "override a config key: section.key=value");
    cmd->add_option("--seed", seed, "master seed (wins over the config)");
  }

  DatasetPlan load() const {
    json j = json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw Error(ErrorKind::Io, "cannot open config " + config);
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, config + ": " + e.what());
      }
      if (!j.is_object()) throw Error(ErrorKind::Config, config + ": expected a JSON object");
    }
    for (const auto& o : overrides) apply_override(j, o);
    DatasetPlan plan = DatasetPlan::from_json(j);
    if (seed) plan.seed = *seed;
    plan.validate();
    return plan;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::vector<std::string> read_label_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::string ext = path.extension().string();
  const bool jsonl = ext == ".jsonl" || ext == ".json";
  std::vector<std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!jsonl) {
      out.push_back(line);
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Input,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (row.is_string()) {
      out.push_back(row.get<std::string>());
    } else if (row.is_object() && row.contains("label") && row["label"].is_string()) {
      out.push_back(row["label"].get<std::string>());
    } else if (row.is_object() && row.contains("text") && row["text"].is_string()) {
      out.push_back(row["text"].get<std::string>());
    } else {
      throw Error(ErrorKind::Input, path.string() + ":" + std::to_string(lineno) +
                                        ": expected a string or an object with \"label\"");
    }
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ocrsynth - synthetic OCR records from LaTeX labels", "ocrsynth"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.footer(config_key_listing());
  app.set_version_flag("--version", kToolVersion);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "more output on stderr (repeatable)");

  // generate
  PlanOptions gen_plan;
  unsigned jobs = 1;
  std::string gen_out;
  CLI::App* generate = app.add_subcommand("generate", "build a dataset from a plan");
  gen_plan.attach(generate);
  generate->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  generate->add_option("--out,-o", gen_out, "output root (overrides output_root)");
  generate->footer(config_key_listing());

  // render
  PlanOptions render_plan;
  std::string render_label, render_out;
  std::size_t render_font = 0, render_size = 0;
  CLI::App* render = app.add_subcommand("render", "render one label to a PNG");
  render_plan.attach(render);
  render->add_option("--label,-l", render_label, "math-mode label")->required();
  render->add_option("--out,-o", render_out, "PNG path")->required();
  render->add_option("--font", render_font, "font id");
  render->add_option("--size", render_size, "size id");

  // transform
  PlanOptions transform_plan;
  std::string transform_in, transform_out;
  CLI::App* transform =
      app.add_subcommand("transform", "apply the corruption pipeline to every PNG of a directory");
  transform_plan.attach(transform);
  transform->add_option("--in,-i", transform_in, "input directory")->required();
  transform->add_option("--out,-o", transform_out, "output directory")->required();

  // evaluate
  std::string refs, hyps, eval_out, tokenizer = "latex";
  bool smoothing = false;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score hypotheses against references");
  evaluate_cmd->add_option("--refs", refs, "references (.txt or .jsonl)")->required();
  evaluate_cmd->add_option("--hyps", hyps, "hypotheses (.txt or .jsonl)")->required();
  evaluate_cmd->add_option("--out,-o", eval_out, "also write the report here");
  evaluate_cmd->add_option("--tokenizer", tokenizer, "latex | whitespace | char")
      ->check(CLI::IsMember({"latex", "whitespace", "char"}));
  evaluate_cmd->add_flag("--smoothing", smoothing, "add-one smoothing for BLEU n>1");

  // stats
  std::string stats_root, stats_images, stats_labels;
  bool stats_json = false;
  CLI::App* stats = app.add_subcommand("stats", "per-subset label statistics");
  stats->add_option("--dataset,-d", stats_root, "dataset root (manifest.jsonl)");
  stats->add_option("--images", stats_images, "external image directory");
  stats->add_option("--labels", stats_labels, "external label file");
  stats->add_flag("--json", stats_json, "JSON instead of a table");

  // inspect
  std::string inspect_label, inspect_root, inspect_id;
  CLI::App* inspect = app.add_subcommand("inspect", "print the parse tree of a label or record");
  inspect->add_option("--label,-l", inspect_label, "label text");
  inspect->add_option("--dataset,-d", inspect_root, "dataset root");
  inspect->add_option("--id", inspect_id, "record id within --dataset");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      out << kToolVersion << '\n';
      return 0;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }

    if (generate->parsed()) {
      DatasetPlan plan = gen_plan.load();
      if (!gen_out.empty()) plan.output_root = gen_out;
      BuildOptions options;
      options.jobs = jobs;
      std::mutex mu;
      if (verbosity > 0) {
        options.progress = [&](std::size_t done, std::size_t total) {
          if (done == total || done % 1000 == 0) {
            std::lock_guard lock(mu);
            err << "generated " << done << "/" << total << '\n';
          }
        };
      }
      const BuildResult r = build_dataset(plan, options);
      nlohmann::ordered_json report;
      report["manifest_sha256"] = r.manifest_sha256;
      report["plan_fingerprint"] = r.manifest.plan_fingerprint;
      report["records"] = r.manifest.entries.size();
      report["output_root"] = plan.output_root;
      out << report.dump() << '\n';
    } else if (render->parsed()) {
      const DatasetPlan plan = render_plan.load();
      const tex::FontSet fonts = load_fonts(plan.render);
      if (render_font >= fonts.font_count() || render_size >= fonts.size_count()) {
        throw UsageError("--font or --size out of range");
      }
      const tex::MathAst ast = tex::parse_label(render_label);
      write_png(render_out, tex::rasterize(ast, plan.render.style(render_font, render_size), fonts));
      if (verbosity > 0) err << "wrote " << render_out << '\n';
    } else if (transform->parsed()) {
      const DatasetPlan plan = transform_plan.load();
      plan.transforms.validate();
      std::vector<fs::path> inputs;
      if (!fs::is_directory(transform_in)) {
        throw Error(ErrorKind::Io, "not a directory: " + transform_in);
      }
      for (const auto& f : fs::directory_iterator(transform_in)) {
        if (f.is_regular_file() && f.path().extension() == ".png") inputs.push_back(f.path());
      }
      std::sort(inputs.begin(), inputs.end());
      fs::create_directories(transform_out);
      for (const auto& p : inputs) {
        // per-file stream so results do not depend on directory contents
        Rng rng(derive_seed(plan.seed, p.filename().string(), 0));
        const PipelineResult r = apply_pipeline(read_png(p), plan.transforms, rng);
        write_png(fs::path(transform_out) / p.filename(), r.image);
        if (verbosity > 0) {
          std::string applied;
          for (const auto& a : r.applied) applied += (applied.empty() ? "" : ",") + a;
          err << p.filename().string() << ": " << (applied.empty() ? "-" : applied) << '\n';
        }
      }
      out << json{{"transformed", inputs.size()}, {"output_dir", transform_out}}.dump() << '\n';
    } else if (evaluate_cmd->parsed()) {
      EvalInput input{read_label_file(refs), read_label_file(hyps)};
      const EvalReport report =
          evaluate(input, BleuOptions{parse_tokenizer(tokenizer), smoothing});
      const std::string body = report.to_json();
      out << body << '\n';
      if (!eval_out.empty()) write_text(eval_out, body + "\n");
    } else if (stats->parsed()) {
      Manifest m;
      if (!stats_root.empty()) {
        m = read_manifest(stats_root);
      } else if (!stats_images.empty() && !stats_labels.empty()) {
        m = load_external(stats_images, stats_labels);
      } else {
        throw UsageError("stats needs --dataset or both --images and --labels");
      }
      const DatasetStats s = compute_stats(m);
      if (stats_json) {
        out << stats_to_json(s).dump(2) << '\n';
      } else {
        out << format_stats_table(s);
      }
    } else if (inspect->parsed()) {
      std::string label = inspect_label;
      if (label.empty()) {
        if (inspect_root.empty() || inspect_id.empty()) {
          throw UsageError("inspect needs --label, or --dataset with --id");
        }
        const Manifest m = read_manifest(inspect_root);
        auto it = std::find_if(m.entries.begin(), m.entries.end(),
                               [&](const RecordEntry& e) { return e.id == inspect_id; });
        if (it == m.entries.end()) throw Error(ErrorKind::Input, "no record " + inspect_id);
        label = it->label;
        out << it->to_json().dump() << '\n';
      }
      const tex::MathAst ast = tex::parse_label(label);
      out << tex::to_tree_string(ast.root);
      out << "canonical: " << tex::serialize(ast) << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    error_line(err, "usage", e.what());
    return 1;
  } catch (const Error& e) {
    error_line(err, error_kind_name(e.kind()), e.what());
    return 2;
  } catch (const std::exception& e) {
    error_line(err, "internal", e.what());
    return 2;
  }
}

}  // namespace ocrsynth
