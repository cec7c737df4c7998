#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace rc::csv {

// Splits one CSV line. Double-quoted fields may contain commas and
// doubled quotes; no multi-line fields.
std::vector<std::string> split_line(std::string_view line, char delim = ',');

// Quotes a field only when it contains the delimiter, a quote, or a newline.
std::string escape(std::string_view field, char delim = ',');

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

// Streaming row writer with minimal quoting.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void row(const std::vector<std::string>& fields);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

// Reads a whole CSV file: first row is the header, rest are data rows.
// Blank lines are skipped. Throws ParseError on I/O failure.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines; // 1-based source line of each row
};
Table read_file(const std::filesystem::path& path);

// FNV-1a 64-bit over raw file bytes, as "fnv1a64:<hex>"; used for manifest digests.
std::string file_digest(const std::filesystem::path& path);

} // namespace rc::csv
