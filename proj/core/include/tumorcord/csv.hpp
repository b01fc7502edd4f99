#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tumorcord {

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_real(double v);
/// Human-facing text at 6 significant digits.
std::string format_short(double v);

/// Comma-separated writer with a header row. Throws IoError on open failure.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(std::initializer_list<double> values);
    void row(std::span<const double> values);
    /// Mixed text/number row; numbers must already be formatted.
    void text_row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace tumorcord
