#include "sedgkit/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sedgkit::cli {

std::string format_real(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return {buf, res.ptr};
}

namespace {

std::string quote_if_needed(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) {
        return cell;
    }
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        os << quote_if_needed(cells[i]);
    }
    os << '\n';
}

} // namespace

CsvReport::CsvReport(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) {
        throw std::invalid_argument("csv: empty header");
    }
}

void CsvReport::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) {
        cells.push_back(format_real(v));
    }
    add_row(std::move(cells));
}

void CsvReport::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw std::invalid_argument("csv: row width differs from header");
    }
    rows_.push_back(std::move(cells));
}

void CsvReport::add_comment(std::string_view text) {
    comments_.emplace_back(text);
}

void CsvReport::write(std::ostream& os) const {
    write_line(os, header_);
    for (const auto& row : rows_) {
        write_line(os, row);
    }
    for (const auto& c : comments_) {
        os << "# " << c << '\n';
    }
}

std::string CsvReport::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

} // namespace sedgkit::cli
