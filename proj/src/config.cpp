#include "ymflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ymflow::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
    if (k.empty() || std::count(k.begin(), k.end(), '.') != 1) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_')
            return false;
    return k.front() != '.' && k.back() != '.';
}

}  // namespace

ParseError::ParseError(const std::string& file, int line, int column,
                       const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ":"
                         + std::to_string(column) + ": " + what),
      line(line),
      column(column) {}

Config Config::parse_text(const std::string& text, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(name, lineno, int(line.size()), "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key))
            throw ParseError(name, lineno, 1, "key must look like section.key");
        if (value.empty())
            throw ParseError(name, lineno, int(eq + 2), "empty value");
        cfg.kv_[key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_text(buf.str(), path);
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
        throw std::runtime_error(name_ + ": missing config key: " + key);
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    size_t pos = 0;
    double v;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(name_ + ": key " + key + ": not a number: " + raw);
    }
    if (pos != raw.size())
        throw std::runtime_error(name_ + ": key " + key + ": trailing junk: " + raw);
    return v;
}

double Config::get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
}

long Config::get_int(const std::string& key) const {
    const std::string raw = get_string(key);
    size_t pos = 0;
    long v;
    try {
        v = std::stol(raw, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(name_ + ": key " + key + ": not an integer: " + raw);
    }
    if (pos != raw.size())
        throw std::runtime_error(name_ + ": key " + key + ": trailing junk: " + raw);
    return v;
}

long Config::get_int(const std::string& key, long dflt) const {
    return has(key) ? get_int(key) : dflt;
}

bool Config::get_bool(const std::string& key) const {
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    throw std::runtime_error(name_ + ": key " + key + ": not a boolean: " + raw);
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    return has(key) ? get_bool(key) : dflt;
}

void Config::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

profiles::Theta0Spec theta0_from_config(const Config& cfg, const std::string& section) {
    profiles::Theta0Spec spec;
    const std::string family = cfg.get_string(section + ".family", "powerlog");
    if (family == "powerlog")
        spec.family = profiles::Theta0Family::PowerLog;
    else if (family == "oscillatory")
        spec.family = profiles::Theta0Family::OscillatoryExplicit;
    else if (family == "table")
        spec.family = profiles::Theta0Family::CustomTable;
    else
        throw std::runtime_error("unknown theta0 family: " + family);
    spec.a = cfg.get_double(section + ".a", 0.5);
    spec.sign = int(cfg.get_int(section + ".sign", 1));
    spec.amplitude = cfg.get_double(section + ".amplitude", 1.0);
    spec.table_path = cfg.get_string(section + ".table_path", "");
    spec.validate();
    return spec;
}

}  // namespace ymflow::config
