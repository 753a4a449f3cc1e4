#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gazeaudit {

// Minimal strict CSV layer for the toolkit's fixed schemas. Fields never contain
// commas or quotes; lines starting with '#' are artifact metadata and skipped on
// read. Parse failures name the file and one-based line number.
struct CsvTable {
    std::string path;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // source line per row, for error messages

    std::size_t column_index(const std::string& name) const;  // throws SchemaError
    const std::string& cell(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::string& path, const std::vector<std::string>& required_columns);
CsvTable parse_csv(const std::string& content, const std::string& path_label,
                   const std::vector<std::string>& required_columns);

double parse_double_field(const CsvTable& t, std::size_t row, std::size_t col);
long parse_long_field(const CsvTable& t, std::size_t row, std::size_t col);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void add_comment(const std::string& line);  // emitted as "# line" before the header
    void add_row(const std::vector<std::string>& fields);
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace gazeaudit
