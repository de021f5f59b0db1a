// resources.cpp

#include "ocrsynth/resources.hpp"

#include <cstdlib>
#include <mutex>

#ifndef OCRSYNTH_DEFAULT_DATA_DIR
#define OCRSYNTH_DEFAULT_DATA_DIR "data"
#endif

namespace ocrsynth {
namespace {

std::mutex& override_mutex() {
  static std::mutex m;
  return m;
}

std::filesystem::path& override_dir() {
  static std::filesystem::path dir;
  return dir;
}

// installed layout: <prefix>/bin/ocrsynth next to <prefix>/share/ocrsynth/data
std::filesystem::path installed_dir() {
  std::error_code ec;
  const auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (ec) return {};
  return exe.parent_path().parent_path() / "share" / "ocrsynth" / "data";
}

}  // namespace

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("OCRSYNTH_DATA_DIR"); env && *env) {
    return env;
  }
  {
    std::lock_guard lock(override_mutex());
    if (!override_dir().empty()) return override_dir();
  }
  const std::filesystem::path built_in = OCRSYNTH_DEFAULT_DATA_DIR;
  std::error_code ec;
  if (!std::filesystem::is_directory(built_in, ec)) {
    if (auto installed = installed_dir(); std::filesystem::is_directory(installed, ec)) {
      return installed;
    }
  }
  return built_in;
}

void set_data_dir(std::filesystem::path dir) {
  std::lock_guard lock(override_mutex());
  override_dir() = std::move(dir);
}

}  // namespace ocrsynth
