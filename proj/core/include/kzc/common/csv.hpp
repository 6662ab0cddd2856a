#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kzc {

/// Round-trip-exact decimal rendering of a double (shortest form that parses
/// back to the same bits). All numeric file output goes through this so that
/// data files are byte-identical across reruns.
std::string format_double(double v);

/// Minimal CSV writer for tidy numeric tables: one header row, then numeric
/// rows. No quoting/escaping — column names must not contain commas.
class CsvWriter {
  public:
    CsvWriter(std::filesystem::path path, std::vector<std::string> columns);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void close();

  private:
    std::filesystem::path path_;
    std::size_t n_columns_;
    std::string buffer_;
    bool closed_ = false;
};

/// A parsed CSV table: header names plus column-major numeric data.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data; // data[c][r]

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    /// Index of a named column; throws std::out_of_range when missing.
    std::size_t column(const std::string& name) const;
};

/// Reads a numeric CSV written by CsvWriter (or any plain numeric CSV with a
/// header row). Throws std::runtime_error on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

} // namespace kzc
