#pragma once

// CSV emission and reading of diagnostic records. Numbers are written in the
// shortest decimal form that round-trips to the same double.

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nsv/diagnostics.hpp"
#include "nsv/error.hpp"

namespace nsv {

inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw Error(ErrorKind::IoError, "number formatting failed");
    return std::string(buf.data(), ptr);
}

inline std::string csv_header() {
    std::string h;
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
        if (i) h += ',';
        h += kRecordColumns[i];
    }
    return h;
}

/// Writes the header before the first row and one row per record.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(&os) {}

    void emit(const DiagnosticsRecord& r) {
        if (!header_written_) {
            *os_ << csv_header() << '\n';
            header_written_ = true;
        }
        auto vals = record_values(r);
        std::string line;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) line += ',';
            line += format_double(vals[i]);
        }
        *os_ << line << '\n';
        if (!*os_) throw Error(ErrorKind::IoError, "write to CSV sink failed");
    }

    void flush() {
        os_->flush();
        if (!*os_) throw Error(ErrorKind::IoError, "flush of CSV sink failed");
    }

    bool header_written() const { return header_written_; }

private:
    std::ostream* os_;
    bool header_written_ = false;
};

inline void emit_record(const DiagnosticsRecord& r, CsvWriter& sink) { sink.emit(r); }

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of a column; UnknownCase when absent.
    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw Error(ErrorKind::UnknownCase, "no column '" + std::string(name) + "'");
    }

    std::vector<std::pair<double, double>> series(std::string_view name) const {
        const std::size_t t = column("t");
        const std::size_t c = column(name);
        std::vector<std::pair<double, double>> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.emplace_back(r[t], r[c]);
        return out;
    }
};

namespace detail {

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::IoError, "empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.columns = detail::split_commas(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = detail::split_commas(line);
        if (cells.size() != t.columns.size())
            throw Error(ErrorKind::IoError, "CSV line " + std::to_string(lineno) + " has " +
                                                std::to_string(cells.size()) + " fields, expected " +
                                                std::to_string(t.columns.size()));
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string& c = cells[i];
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), row[i]);
            if (ec != std::errc() || ptr != c.data() + c.size())
                throw Error(ErrorKind::IoError, "CSV line " + std::to_string(lineno) +
                                                    ": bad number '" + c + "'");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return read_csv(f);
}

} // namespace nsv
