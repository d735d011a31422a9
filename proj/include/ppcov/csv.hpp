#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ppcov::csv {

/// Shortest round-trip is not guaranteed by printf, 17 significant digits is.
std::string format_double(double v);

/// Strict parse: the whole field must be a number (surrounding blanks allowed).
bool try_parse_double(std::string_view field, double& out);

/// Splits one line on commas; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_line(std::string_view line);

/// Reads all non-empty lines of a CSV file, stripping a trailing '\r'.
std::vector<std::vector<std::string>> read_file(const std::filesystem::path& path);

/// Line-oriented writer that throws std::runtime_error on I/O failure.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::string quote_if_needed(const std::string& field);

}  // namespace ppcov::csv
