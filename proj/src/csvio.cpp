#include "fdecon/csvio.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fdec {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::filesystem::path tmp_name(const std::filesystem::path& path) {
    auto t = path;
    t += ".tmp";
    return t;
}

}  // namespace

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& header)
    : path_(std::move(path)), tmp_(tmp_name(path_)), os_(tmp_, std::ios::trunc) {
    if (!os_) throw std::runtime_error("cannot open for writing: " + tmp_.string());
    row(header);
}

CsvWriter::~CsvWriter() noexcept {
    try {
        close();
    } catch (...) {
    }
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += quote_field(fields[i]);
    }
    line += '\n';
    os_ << line;
    if (!os_) throw std::runtime_error("failed writing: " + tmp_.string());
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    os_.flush();
    if (!os_) throw std::runtime_error("failed flushing: " + tmp_.string());
    os_.close();
    std::filesystem::rename(tmp_, path_);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open csv: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::vector<std::string> cur;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cur.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
            cur.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(cur));
            cur.clear();
        } else {
            field += c;
        }
    }
    if (!field.empty() || !cur.empty()) {
        cur.push_back(std::move(field));
        rows.push_back(std::move(cur));
    }
    return rows;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = tmp_name(path);
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
        os << text;
        if (!os) throw std::runtime_error("failed writing: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace fdec
