#include "tumorcord/csv.hpp"

#include <cstdio>

#include "tumorcord/errors.hpp"

namespace tumorcord {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), path_(path) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    text_row(header);
}

void CsvWriter::row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_real(values[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed on " + path_);
}

void CsvWriter::text_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed on " + path_);
}

}  // namespace tumorcord
