#include "adaptmap/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace adaptmap {

namespace {

struct parse_cursor {
    int line = 0;
    int col = 0;
};

[[noreturn]] void fail_at(const parse_cursor& c, const std::string& msg) {
    std::ostringstream os;
    os << "config parse error at line " << c.line << ", column " << c.col << ": " << msg;
    throw domain_error(os.str());
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_real(const std::string& v, const parse_cursor& c, const std::string& key) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) fail_at(c, "trailing characters in numeric value for '" + key + "'");
        return x;
    } catch (const domain_error&) {
        throw;
    } catch (const std::exception&) {
        fail_at(c, "expected a number for '" + key + "', got '" + v + "'");
    }
}

long to_int(const std::string& v, const parse_cursor& c, const std::string& key) {
    try {
        size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) fail_at(c, "trailing characters in integer value for '" + key + "'");
        return x;
    } catch (const domain_error&) {
        throw;
    } catch (const std::exception&) {
        fail_at(c, "expected an integer for '" + key + "', got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const parse_cursor& c, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail_at(c, "expected a boolean for '" + key + "', got '" + v + "'");
}

} // namespace

run_config parse_config(const std::string& text) {
    run_config cfg;
    char digest_buf[32];
    std::snprintf(digest_buf, sizeof digest_buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(text)));
    cfg.digest = digest_buf;

    std::set<std::string> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    parse_cursor cur;

    while (std::getline(in, raw)) {
        ++cur.line;
        cur.col = 1;
        std::string line = raw;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail_at(cur, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "tolerances" && section != "protocol" &&
                section != "output")
                fail_at(cur, "unknown section [" + section + "]");
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) fail_at(cur, "expected key = value");
        cur.col = static_cast<int>(raw.find('=')) + 1;
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(cur, "empty key");
        if (val.empty()) fail_at(cur, "empty value for '" + key + "'");
        if (section.empty()) fail_at(cur, "key '" + key + "' outside any section");
        if (!seen.insert(section + "." + key).second)
            fail_at(cur, "duplicate key '" + key + "' in [" + section + "]");

        if (section == "model") {
            if (key == "family") {
                if (val == "quartic") cfg.params.family = nonlinearity::quartic;
                else if (val == "exponential") cfg.params.family = nonlinearity::exponential;
                else fail_at(cur, "family must be 'quartic' or 'exponential'");
            } else if (key == "a") cfg.params.a = to_real(val, cur, key);
            else if (key == "b") cfg.params.b = to_real(val, cur, key);
            else if (key == "I") cfg.params.I = to_real(val, cur, key);
            else if (key == "d") cfg.params.d = to_real(val, cur, key);
            else if (key == "eps") cfg.params.eps = to_real(val, cur, key);
            else if (key == "v_reset") {
                cfg.params.v_reset = to_real(val, cur, key);
                cfg.has_v_reset = true;
            } else fail_at(cur, "unknown key '" + key + "' in [model]");
        } else if (section == "tolerances") {
            if (key == "map_tol") cfg.tol.map_tol = to_real(val, cur, key);
            else if (key == "orbit_tol") cfg.tol.orbit_tol = to_real(val, cur, key);
            else if (key == "root_tol") cfg.tol.root_tol = to_real(val, cur, key);
            else fail_at(cur, "unknown key '" + key + "' in [tolerances]");
        } else if (section == "protocol") {
            if (key == "transient") cfg.protocol.transient_n = static_cast<int>(to_int(val, cur, key));
            else if (key == "sample") cfg.protocol.sample_n = static_cast<int>(to_int(val, cur, key));
            else if (key == "p_max") cfg.protocol.p_max = static_cast<int>(to_int(val, cur, key));
            else if (key == "warm_start") cfg.protocol.warm_start = to_bool(val, cur, key);
            else if (key == "workers") cfg.protocol.workers = static_cast<int>(to_int(val, cur, key));
            else fail_at(cur, "unknown key '" + key + "' in [protocol]");
        } else { // output
            if (key == "format") {
                if (val != "csv" && val != "json") fail_at(cur, "format must be 'csv' or 'json'");
                cfg.output.format = val;
            } else if (key == "path") cfg.output.path = val;
            else fail_at(cur, "unknown key '" + key + "' in [output]");
        }
    }

    // validation: required model fields, positivity
    auto require_key = [&](const char* k) {
        if (!seen.count(std::string("model.") + k))
            throw domain_error(std::string("config validation error: missing required field '") +
                               k + "' in [model]");
    };
    require_key("family");
    require_key("b");
    require_key("I");
    require_key("d");
    require_key("eps");
    if (cfg.params.family == nonlinearity::quartic) require_key("a");

    if (cfg.params.eps <= 0)
        throw domain_error("config validation error: field 'eps' must be positive");
    if (cfg.params.b <= 0)
        throw domain_error("config validation error: field 'b' must be positive");
    if (cfg.params.d < 0)
        throw domain_error("config validation error: field 'd' must be nonnegative");
    if (cfg.tol.map_tol <= 0 || cfg.tol.orbit_tol <= 0 || cfg.tol.root_tol <= 0)
        throw domain_error("config validation error: tolerances must be positive");
    if (cfg.protocol.transient_n < 1 || cfg.protocol.sample_n < 2)
        throw domain_error("config validation error: protocol counts out of range");

    // sweeps keep their own (relaxed) map tolerance; orbit closure follows config
    cfg.protocol.orbit_tol = cfg.tol.orbit_tol;
    return cfg;
}

run_config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace adaptmap
