#include "arqsec/harness/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arqsec::harness {

std::string format_cell(const Cell& c)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const
        {
            if (std::isnan(v)) return "nan";
            if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, ptr);
        }
    };
    return std::visit(Visitor{}, c);
}

void ResultTable::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) {
        throw std::logic_error("row width does not match the column schema of " + name);
    }
    rows.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string& col) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == col) {
            return i;
        }
    }
    throw std::out_of_range("no column " + col + " in " + name);
}

double ResultTable::number(std::size_t row, const std::string& col) const
{
    const Cell& c = rows.at(row).at(column(col));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw std::invalid_argument("cell " + col + " is not numeric");
}

void ResultTable::write_csv(std::ostream& out) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_cell(row[i]);
        }
        out << '\n';
    }
}

std::string ResultTable::csv() const
{
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

void ResultTable::write(const std::filesystem::path& path) const
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto put = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write " + p.string());
        }
        f << text;
    };
    put(path, csv());
    std::filesystem::path stem = path;
    stem.replace_extension();
    put(stem.string() + ".meta.json", meta.dump(2) + "\n");
    for (const auto& [suffix, content] : attachments) {
        put(stem.string() + "." + suffix, content);
    }
}

}  // namespace arqsec::harness
