#include "kzc/common/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace kzc {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> columns)
    : path_(std::move(path)), n_columns_(columns.size()) {
    if (columns.empty()) throw std::invalid_argument("CsvWriter: no columns");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += columns[i];
    }
    buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // Destructor must not throw; an explicit close() reports errors.
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (closed_) throw std::logic_error("CsvWriter: row() after close()");
    if (values.size() != n_columns_)
        throw std::invalid_argument("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += format_double(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_.string());
    out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out) throw std::runtime_error("CsvWriter: write failed for " + path_.string());
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("CSV column not found: " + name);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CSV file " + path.string());

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    table.data.assign(table.columns.size(), {});

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t col = 0;
        const char* p = line.data();
        const char* end = p + line.size();
        while (true) {
            const char* comma = p;
            while (comma != end && *comma != ',') ++comma;
            double v = 0.0;
            const auto res = std::from_chars(p, comma, v);
            if (res.ec != std::errc{} || res.ptr != comma)
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": not a number");
            if (col >= table.columns.size())
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": too many fields");
            table.data[col++].push_back(v);
            if (comma == end) break;
            p = comma + 1;
        }
        if (col != table.columns.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": too few fields");
    }
    return table;
}

} // namespace kzc
