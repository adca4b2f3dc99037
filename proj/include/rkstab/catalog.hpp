#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rkstab/tableau.hpp"

namespace rkstab {

// Built-in methods resolvable by name, no tableau file needed.
std::vector<std::string> catalog_names();
std::optional<ButcherTableau> find_catalog_method(const std::string& name);

// Catalog name first, then tableau file path. Throws on failure.
ButcherTableau resolve_method(const std::string& name_or_path);

}  // namespace rkstab
