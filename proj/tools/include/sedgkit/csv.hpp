#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sedgkit::cli {

/// Shortest-safe decimal form of x with 17 significant digits ("nan", "inf", "-inf" otherwise).
std::string format_real(double x);

/// Rectangular CSV with LF line endings. Comment lines start with '#'.
class CsvReport {
public:
    explicit CsvReport(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> cells);
    void add_comment(std::string_view text);

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }

    void write(std::ostream& os) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> comments_;
};

} // namespace sedgkit::cli
