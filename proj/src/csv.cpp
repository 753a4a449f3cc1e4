#include "gazeaudit/csv.hpp"

#include <charconv>
#include <sstream>

#include "gazeaudit/error.hpp"
#include "gazeaudit/util.hpp"

namespace gazeaudit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw SchemaError(path + ": missing required column '" + name + "'");
}

const std::string& CsvTable::cell(std::size_t row, std::size_t col) const {
    return rows[row][col];
}

CsvTable parse_csv(const std::string& content, const std::string& path_label,
                   const std::vector<std::string>& required_columns) {
    CsvTable t;
    t.path = path_label;

    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        if (!have_header) {
            t.columns = split_fields(line);
            have_header = true;
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != t.columns.size()) {
            throw ParseError(path_label + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(t.columns.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.row_lines.push_back(line_no);
    }
    if (!have_header) throw SchemaError(path_label + ": missing header line");
    for (const auto& c : required_columns) t.column_index(c);
    return t;
}

CsvTable read_csv(const std::string& path, const std::vector<std::string>& required_columns) {
    return parse_csv(read_text_file(path), path, required_columns);
}

double parse_double_field(const CsvTable& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(t.path + ":" + std::to_string(t.row_lines[row]) + ": bad numeric value '" +
                         s + "' in column '" + t.columns[col] + "'");
    }
    return value;
}

long parse_long_field(const CsvTable& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    long value = 0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(t.path + ":" + std::to_string(t.row_lines[row]) + ": bad integer value '" +
                         s + "' in column '" + t.columns[col] + "'");
    }
    return value;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_comment(const std::string& line) { comments_.push_back(line); }

void CsvWriter::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_.size())
        throw IntegrityError("CSV row width " + std::to_string(fields.size()) +
                             " does not match header width " + std::to_string(columns_.size()));
    rows_.push_back(fields);
}

std::string CsvWriter::str() const {
    std::ostringstream os;
    for (const auto& c : comments_) os << "# " << c << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) os << ',';
        os << columns_[i];
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace gazeaudit
