#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rarl {

/// Locale-independent, shortest-round-trip text for a double.
std::string format_number(double value);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Writes a header once, then rows of preformatted cells. Row width must match
/// the header.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(const std::vector<std::string>& cells);
    std::size_t rows_written() const { return rows_; }

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

}  // namespace rarl
