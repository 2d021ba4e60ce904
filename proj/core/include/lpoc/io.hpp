#pragma once

#include <map>
#include <string>
#include <vector>

#include "lpoc/errors.hpp"

namespace lpoc {

/// Minimal TOML-ish config: [section] headers, key = value lines, # comments.
/// Values stay strings; typed access via the getters.  Root-level keys live
/// in the "" section.
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> tables;

    bool has(const std::string& section, const std::string& key) const;
    std::string get_str(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
    std::string require_str(const std::string& section, const std::string& key) const;
    double get_num(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    /// Parses "[a, b, c]".
    std::vector<double> get_vec(const std::string& section, const std::string& key,
                                const std::vector<double>& fallback) const;
};

ConfigFile parse_config(const std::string& path);
ConfigFile parse_config_text(const std::string& text);

/// %.17g, locale-independent.
std::string format_g17(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header = nullptr);

/// Emits a gnuplot script rendering the named trajectory CSV.
void write_plot_script(const std::string& path, const std::string& csv_path,
                       const std::string& model);

}  // namespace lpoc
