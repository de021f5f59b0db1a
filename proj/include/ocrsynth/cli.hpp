// cli.hpp - the ocrsynth command line as a callable function.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ocrsynth {

/// Exit statuses: 0 success, 1 usage error, 2 data or contract error. Errors
/// go to `err` as one JSON line {"error": kind, "message": text}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Labels for evaluation: one per line, or JSONL where each row is a JSON
/// string or an object with a "label" (or "text") field. Format follows the
/// extension (.jsonl / .json), else plain text.
std::vector<std::string> read_label_file(const std::filesystem::path& path);

}  // namespace ocrsynth
