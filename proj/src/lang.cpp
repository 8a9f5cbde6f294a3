#include "vcm/lang.hpp"

namespace vcm {

namespace {

constexpr std::string_view kPythonMarkers[] = {"setup.py", "__init__.py", "__init.py__"};
constexpr std::string_view kJavaScriptMarkers[] = {"index.js", "app.js", "server.js"};

bool contains_any(const RootListing& root, const std::string_view (&markers)[3]) {
    for (auto marker : markers) {
        if (root.contains(std::string(marker)))
            return true;
    }
    return false;
}

}  // namespace

ProjectLanguage classify_language(const RootListing& root) {
    const bool python = contains_any(root, kPythonMarkers);
    const bool javascript = contains_any(root, kJavaScriptMarkers);
    if (python && javascript)
        return ProjectLanguage::Both;
    if (python)
        return ProjectLanguage::Python;
    if (javascript)
        return ProjectLanguage::JavaScript;
    return ProjectLanguage::Unknown;
}

std::string_view language_name(ProjectLanguage lang) {
    switch (lang) {
    case ProjectLanguage::Python:
        return "Python";
    case ProjectLanguage::JavaScript:
        return "JavaScript";
    case ProjectLanguage::Both:
        return "Both";
    case ProjectLanguage::Unknown:
        return "Unknown";
    }
    return "Unknown";
}

std::optional<ProjectLanguage> language_from_name(std::string_view name) {
    if (name == "Python")
        return ProjectLanguage::Python;
    if (name == "JavaScript")
        return ProjectLanguage::JavaScript;
    if (name == "Both")
        return ProjectLanguage::Both;
    if (name == "Unknown")
        return ProjectLanguage::Unknown;
    return std::nullopt;
}

}  // namespace vcm
