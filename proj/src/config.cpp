#include "fdecon/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fdec {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path.string());
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                         ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        cfg.values_[full].push_back({value, lineno});
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

void Config::fail(const std::string& key, const std::string& what) const {
    const auto it = values_.find(key);
    const std::string loc =
        it == values_.end() ? origin_ : origin_ + ":" + std::to_string(it->second.front().line);
    throw std::runtime_error(loc + ": field '" + key + "' " + what);
}

const Config::Entry& Config::single(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(key, "is required but missing");
    if (it->second.size() != 1) fail(key, "was given more than once");
    return it->second.front();
}

std::string Config::get_str(const std::string& key) const { return single(key).value; }

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_str(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const auto& e = single(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(key, "is not a number: '" + e.value + "'");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
    const auto& e = single(key);
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(key, "is not an integer: '" + e.value + "'");
    }
}

long Config::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = get_str(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "is not a boolean: '" + v + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    const auto& e = single(key);
    std::istringstream is(e.value);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (...) {
            fail(key, "contains a non-numeric entry: '" + tok + "'");
        }
    }
    if (out.empty()) fail(key, "must contain at least one number");
    return out;
}

std::vector<std::string> Config::get_all(const std::string& key) const {
    std::vector<std::string> out;
    const auto it = values_.find(key);
    if (it != values_.end())
        for (const auto& e : it->second) out.push_back(e.value);
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = {{value, 0}};
}

std::string Config::dump() const {
    // sectionless keys first, then sections in map (alphabetical) order
    std::ostringstream os;
    for (const auto& [full, entries] : values_) {
        if (full.find('.') != std::string::npos) continue;
        for (const auto& e : entries) os << full << " = " << e.value << '\n';
    }
    std::string cur_section;
    for (const auto& [full, entries] : values_) {
        const auto dot = full.find('.');
        if (dot == std::string::npos) continue;
        const std::string section = full.substr(0, dot);
        const std::string key = full.substr(dot + 1);
        if (section != cur_section) {
            os << "\n[" << section << "]\n";
            cur_section = section;
        }
        for (const auto& e : entries) os << key << " = " << e.value << '\n';
    }
    return os.str();
}

}  // namespace fdec
