#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fdec {

/// Hand-editable key-value configuration: `[section]` headers, `key = value`
/// lines, `#` comments. Repeated keys accumulate (used for ladder points).
/// Lookup keys are written "section.key"; the unnamed leading section is "".
class Config {
  public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;

    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Whitespace-separated doubles from a single value.
    std::vector<double> get_double_list(const std::string& key) const;

    /// All values recorded for a repeated key, in file order.
    std::vector<std::string> get_all(const std::string& key) const;

    /// Serialized form usable as a manifest (reparses to the same config).
    std::string dump() const;

    void set(const std::string& key, const std::string& value);

    const std::string& origin() const { return origin_; }

  private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, std::vector<Entry>> values_;
    std::string origin_;

    const Entry& single(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

}  // namespace fdec
