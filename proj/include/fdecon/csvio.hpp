#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fdec {

std::string format_double(double v);

/// RFC-4180 quoting. Rows are buffered and written to a temporary file that is
/// renamed into place on close, so an interrupted run leaves no partial file.
class CsvWriter {
  public:
    CsvWriter(std::filesystem::path path, const std::vector<std::string>& header);
    ~CsvWriter() noexcept;

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& fields);
    void close();  // flush + atomic rename; called by the destructor if needed

  private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream os_;
    bool closed_ = false;
};

/// Parses a CSV written by CsvWriter (quoting-aware, header row included).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

/// Writes text to path atomically (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace fdec
