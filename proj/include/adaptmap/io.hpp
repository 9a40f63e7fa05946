#pragma once

#include <string>

namespace adaptmap {

inline constexpr const char* schema_tag = "adaptmap/1";

/// Round-trip exact float formatting (17 significant digits).
std::string fmt17(double x);

/// "# schema: adaptmap/1\n# config_digest=<hex>\n" prefix for CSV artifacts.
std::string csv_header(const std::string& digest);

/// Writes to the path, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& body);

} // namespace adaptmap
