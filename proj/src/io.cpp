#include "adaptmap/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "adaptmap/common.hpp"

namespace adaptmap {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_header(const std::string& digest) {
    return std::string("# schema: ") + schema_tag + "\n# config_digest=" + digest + "\n";
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) throw domain_error("cannot open output path: " + path);
    out << body;
    if (!out) throw domain_error("failed writing output: " + path);
}

} // namespace adaptmap
