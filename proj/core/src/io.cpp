#include "lpoc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lpoc {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_num(const std::string& section, const std::string& key, const std::string& raw) {
    try {
        size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ContractViolation("config: [" + section + "] " + key + " is not a number: " + raw);
    }
}

}  // namespace

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto t = tables.find(section);
    return t != tables.end() && t->second.count(key) > 0;
}

std::string ConfigFile::get_str(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    auto t = tables.find(section);
    if (t == tables.end()) return fallback;
    auto v = t->second.find(key);
    return v == t->second.end() ? fallback : v->second;
}

std::string ConfigFile::require_str(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw ContractViolation("config: missing required key [" + section + "] " + key);
    return tables.at(section).at(key);
}

double ConfigFile::get_num(const std::string& section, const std::string& key,
                           double fallback) const {
    if (!has(section, key)) return fallback;
    return parse_num(section, key, tables.at(section).at(key));
}

long ConfigFile::get_int(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) return fallback;
    double v = parse_num(section, key, tables.at(section).at(key));
    long r = std::lround(v);
    if (static_cast<double>(r) != v)
        throw ContractViolation("config: [" + section + "] " + key + " must be an integer");
    return r;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& v = tables.at(section).at(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ContractViolation("config: [" + section + "] " + key + " must be true or false");
}

std::vector<double> ConfigFile::get_vec(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = tables.at(section).at(key);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ContractViolation("config: [" + section + "] " + key + " must be an array [..]");
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_num(section, key, item));
    }
    return out;
}

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile cfg;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        // strip comments outside quotes
        bool in_q = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_q = !in_q;
            if (line[i] == '#' && !in_q) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ContractViolation("config line " + std::to_string(lineno) +
                                        ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.tables[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractViolation("config line " + std::to_string(lineno) +
                                    ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ContractViolation("config line " + std::to_string(lineno) + ": empty key");
        cfg.tables[section][key] = val;
    }
    return cfg;
}

ConfigFile parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ContractViolation("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) throw ContractViolation("csv: cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw ContractViolation("csv: row width does not match header");
        for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_g17(row[i]);
        f << "\n";
    }
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header) {
    std::ifstream f(path);
    if (!f) throw ContractViolation("csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw ContractViolation("csv: empty file " + path);
    if (header) {
        header->clear();
        std::stringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) header->push_back(col);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_plot_script(const std::string& path, const std::string& csv_path,
                       const std::string& model) {
    std::ofstream f(path);
    if (!f) throw ContractViolation("plot: cannot open " + path + " for writing");
    f << "# gnuplot script; run: gnuplot " << path << "\n";
    f << "set datafile separator ','\n";
    f << "set key autotitle columnhead\n";
    f << "set grid\n";
    if (model == "unicycle") {
        f << "set size ratio -1\n";
        f << "set object 1 circle at 0,0 size 1 fc rgb 'gray'\n";
        f << "plot '" << csv_path << "' using 'x':'y' with lines title 'path'\n";
        f << "pause -1\n";
        f << "plot '" << csv_path
          << "' using 't':'u1' with lines, '' using 't':'u2' with lines, '' using "
             "'t':'lambda3' with lines\n";
    } else {
        f << "plot '" << csv_path
          << "' using 't':'mu1' with lines, '' using 't':'mu2' with lines, '' using "
             "'t':'mu3' with lines\n";
        f << "pause -1\n";
        f << "plot '" << csv_path
          << "' using 't':'alpha1' with lines, '' using 't':'alpha2' with lines, '' using "
             "'t':'alpha3' with lines\n";
    }
    f << "pause -1\n";
}

}  // namespace lpoc
