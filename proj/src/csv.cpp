#include "rarl/csv.hpp"

#include "rarl/errors.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rarl {

std::string format_number(double value)
{
    if (value == 0.0) {
        return "0";  // folds -0
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals)
{
    char buf[128];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    if (res.ec != std::errc{}) {
        return format_number(value);
    }
    std::string s(buf, res.ptr);
    if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size())
{
    if (!out_) {
        throw std::runtime_error("cannot write " + path.string());
    }
    row(header);
    rows_ = 0;
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) {
        throw ContractViolation("csv row has " + std::to_string(cells.size())
                                + " cells, header has " + std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            out_ << ',';
        }
        out_ << cells[i];
    }
    out_ << '\n';
    ++rows_;
}

}  // namespace rarl
