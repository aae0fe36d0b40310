#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "ymflow/profiles.hpp"

namespace ymflow::config {

struct ParseError : std::runtime_error {
    ParseError(const std::string& file, int line, int column, const std::string& what);
    int line, column;
};

// Flat `section.key = value` files with `#` comments, no nesting.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& name = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long dflt) const;
    bool get_bool(const std::string& key) const;
    bool get_bool(const std::string& key, bool dflt) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
    std::string name_;
};

// theta0.family = powerlog | oscillatory | table, plus theta0.a,
// theta0.sign, theta0.amplitude, theta0.table_path.
profiles::Theta0Spec theta0_from_config(const Config& cfg,
                                        const std::string& section = "theta0");

}  // namespace ymflow::config
