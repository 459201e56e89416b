#include "matsim/io.hpp"

#include "matsim/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace matsim {

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw DimensionMismatchError("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    const auto append_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_row(header_);
    for (const auto& r : rows_) append_row(r);
    return out;
}

CsvTable parse_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    const auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto pos = l.find(',', start);
            cells.push_back(l.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return cells;
    };
    if (!std::getline(in, line)) throw ParseError("empty csv");
    CsvTable table(split(line));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        table.add_row(split(line));
    }
    return table;
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace matsim
