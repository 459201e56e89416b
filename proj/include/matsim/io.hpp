#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace matsim {

// Locale-independent, 17 significant digits (round-trips a double exactly).
std::string format_double(double value);

// Minimal CSV table: header row plus string cells, serialized with '\n'.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

CsvTable parse_csv(std::string_view text);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

} // namespace matsim
