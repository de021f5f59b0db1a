// resources.hpp - location of bundled fonts, command table and sample corpus.

#pragma once

#include <filesystem>

namespace ocrsynth {

/// $OCRSYNTH_DATA_DIR if set, else the override installed by
/// set_data_dir(), else the source-tree data/ directory baked in at build time
/// (or <prefix>/share/ocrsynth/data next to an installed executable when the
/// source tree is gone).
std::filesystem::path data_dir();

void set_data_dir(std::filesystem::path dir);

}  // namespace ocrsynth
