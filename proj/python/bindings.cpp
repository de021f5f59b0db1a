// bindings.cpp - pybind11 surface of the library; the Python package adds
// JSON conversion and keyword defaults on top.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ocrsynth/cli.hpp"
#include "ocrsynth/config.hpp"
#include "ocrsynth/dataset.hpp"
#include "ocrsynth/error.hpp"
#include "ocrsynth/metrics.hpp"
#include "ocrsynth/png_io.hpp"
#include "ocrsynth/resources.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/transforms.hpp"

namespace py = pybind11;
using namespace ocrsynth;
using nlohmann::json;

namespace {

DatasetPlan plan_from(const std::string& plan_json) {
  return DatasetPlan::from_json(plan_json.empty() ? json::object() : json::parse(plan_json));
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

std::string manifest_jsonl(const Manifest& m) { return m.to_jsonl(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ocrsynth native core";
  static py::exception<Error> error_type(m, "OcrsynthError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("kind") = error_kind_name(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.attr("__version__") = kToolVersion;
  m.def("set_data_dir", [](const std::filesystem::path& p) { set_data_dir(p); });
  m.def("data_dir", &data_dir);
  m.def("config_keys_with_defaults", &config_keys_with_defaults);
  m.def("resolve_plan", [](const std::string& plan_json, const std::vector<std::string>& overrides) {
    json j = plan_json.empty() ? json::object() : json::parse(plan_json);
    for (const auto& o : overrides) apply_override(j, o);
    const DatasetPlan plan = DatasetPlan::from_json(j);
    plan.validate();
    return plan.to_json().dump();
  });
  m.def("plan_fingerprint", [](const std::string& plan_json) { return plan_from(plan_json).fingerprint(); });

  // labels
  m.def("canonicalize", [](const std::string& label) { return tex::serialize(tex::parse_label(label)); });
  m.def("parse_tree", [](const std::string& label) {
    return tex::to_tree_string(tex::parse_label(label).root);
  });
  m.def("generate_labels", [](const std::string& kind, std::size_t n, std::uint64_t seed,
                              const std::string& plan_json) {
    const DatasetPlan plan = plan_from(plan_json);
    const LabelKind k = parse_label_kind(kind);
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(n);
    if (k == LabelKind::English) {
      const auto path = plan.corpus.path.empty() ? data_dir() / "corpus" / "sample.txt"
                                                 : std::filesystem::path(plan.corpus.path);
      const Corpus corpus = load_corpus(path, parse_corpus_format(plan.corpus.format));
      const tex::FontSet fonts = load_fonts(plan.render);
      const auto renderable = [&](char32_t c) { return fonts.renderable(c); };
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(gen_english_label(corpus, plan.english, rng, renderable).text);
    } else if (k == LabelKind::Chem) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(gen_chem_label(plan.chem, rng).text);
    } else if (k == LabelKind::Numeric) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(gen_numeric_label(plan.numeric, rng).text);
    } else {
      throw Error(ErrorKind::Contract, "no generator for " + kind);
    }
    return out;
  });

  // images
  m.def("render_png", [](const std::string& label, std::size_t font, std::size_t size,
                         const std::string& plan_json) {
    const DatasetPlan plan = plan_from(plan_json);
    const tex::FontSet fonts = load_fonts(plan.render);
    if (font >= fonts.font_count() || size >= fonts.size_count())
      throw Error(ErrorKind::Contract, "font or size id out of range");
    return to_bytes(encode_png(
        tex::rasterize(tex::parse_label(label), plan.render.style(font, size), fonts)));
  });
  m.def("transform_png", [](const py::bytes& png, std::uint64_t seed, const std::string& plan_json) {
    const DatasetPlan plan = plan_from(plan_json);
    Rng rng(seed);
    const PipelineResult r = apply_pipeline(decode_png(from_bytes(png)), plan.transforms, rng);
    return py::make_tuple(to_bytes(encode_png(r.image)), r.applied);
  });
  m.def("bold_png", [](const py::bytes& png, int n) {
    return to_bytes(encode_png(bold(binarize(decode_png(from_bytes(png))), n)));
  });
  m.def("pixelate_png", [](const py::bytes& png, double factor) {
    return to_bytes(encode_png(pixelate(decode_png(from_bytes(png)), factor)));
  });

  // metrics
  m.def("levenshtein", py::overload_cast<std::string_view, std::string_view>(&levenshtein));
  m.def("evaluate", [](const std::vector<std::string>& refs, const std::vector<std::string>& hyps,
                       const std::string& tokenizer, bool smoothing) {
    return evaluate({refs, hyps}, {parse_tokenizer(tokenizer), smoothing}).to_json();
  });
  m.def("edit_score", [](const std::vector<std::string>& refs, const std::vector<std::string>& hyps) {
    return edit_score({refs, hyps});
  });
  m.def("bleu4", [](const std::vector<std::string>& refs, const std::vector<std::string>& hyps,
                    const std::string& tokenizer, bool smoothing) {
    return bleu4({refs, hyps}, {parse_tokenizer(tokenizer), smoothing});
  });
  m.def("exact_match", [](const std::vector<std::string>& refs, const std::vector<std::string>& hyps) {
    return exact_match({refs, hyps});
  });

  // datasets; the GIL is released while workers render
  m.def("build_dataset", [](const std::string& plan_json, unsigned jobs) {
    const DatasetPlan plan = plan_from(plan_json);
    BuildResult r;
    {
      py::gil_scoped_release release;
      r = build_dataset(plan, {jobs, {}});
    }
    return py::make_tuple(r.manifest_sha256, r.manifest.plan_fingerprint, r.manifest.entries.size());
  });
  m.def("read_manifest", [](const std::filesystem::path& root) { return manifest_jsonl(read_manifest(root)); });
  m.def("dataset_stats", [](const std::filesystem::path& root) {
    return stats_to_json(compute_stats(read_manifest(root))).dump();
  });
  m.def("load_external", [](const std::filesystem::path& images, const std::filesystem::path& labels,
                            int max_width) {
    ExternalOptions opts;
    opts.max_width = max_width;
    return manifest_jsonl(load_external(images, labels, "external", opts));
  });
  m.def("assign_split", [](const std::string& id, double train, double dev, double test,
                           std::uint64_t seed) {
    return std::string(split_name(assign_split(id, SplitRatios{train, dev, test}, seed)));
  });

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "ocrsynth");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int status;
    {
      py::gil_scoped_release release;
      status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(status, out.str(), err.str());
  });
}
