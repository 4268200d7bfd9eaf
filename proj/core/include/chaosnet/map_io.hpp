#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "chaosnet/dynamics.hpp"

namespace chaosnet {

/// Map file: line 1 holds n, line 2 holds the 2^n table entries in v(x) order.
[[nodiscard]] BooleanMap read_map(std::istream& in);
[[nodiscard]] BooleanMap read_map_file(const std::filesystem::path& path);
void write_map(std::ostream& out, const BooleanMap& f);

/// A builtin name (see builtin_map) or a path to a map file.
[[nodiscard]] BooleanMap load_map(const std::string& name_or_path, unsigned default_n = 4);

}  // namespace chaosnet
