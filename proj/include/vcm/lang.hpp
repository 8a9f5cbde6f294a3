#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace vcm {

// File and directory base names found in a revision's root tree.
// Compared case-sensitively.
using RootListing = std::set<std::string>;

enum class ProjectLanguage { Python, JavaScript, Both, Unknown };

// Root-directory heuristics: setup.py / __init__.py (plus the literal
// "__init.py__" spelling) mark Python; index.js / app.js / server.js mark
// JavaScript. package.json alone never triggers JavaScript since other
// ecosystems ship it too.
ProjectLanguage classify_language(const RootListing& root);

std::string_view language_name(ProjectLanguage lang);
std::optional<ProjectLanguage> language_from_name(std::string_view name);

}  // namespace vcm
