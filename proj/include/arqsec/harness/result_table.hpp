#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace arqsec::harness {

inline constexpr const char* kToolVersion = "0.1.0";

/// Empty cell, text, integer, or real (written in shortest round-trip form).
using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

std::string format_cell(const Cell& c);

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json meta = nlohmann::json::object();
    /// Extra files written next to the table: (suffix, content).
    std::vector<std::pair<std::string, std::string>> attachments;

    void add_row(std::vector<Cell> row);
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& col) const;

    void write_csv(std::ostream& out) const;
    std::string csv() const;
    /// Writes <path>, <path-without-ext>.meta.json and attachments.
    void write(const std::filesystem::path& path) const;
};

}  // namespace arqsec::harness
