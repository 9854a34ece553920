// CSV ingestion and serialization for PU datasets.
//
// Comma-separated, optional header row, '.' decimal point. Two forms:
//   * labeled: one file whose label column holds 1 (positive) / 0 (unlabeled)
//   * two-file: one file of positives, one of unlabeled points
// Values are written with 17 significant digits so a save/load round trip
// reproduces every double bit-identically.

#ifndef ALPHAMAX_CSV_HPP
#define ALPHAMAX_CSV_HPP

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphamax/types.hpp"

namespace alphamax {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && errno != ERANGE;
}

struct CsvTable {
    std::vector<std::string> header;  // empty when the file has no header
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_numbers;  // 1-based line numbers, for messages
};

// Reads a numeric CSV. The first row is treated as a header iff at least one
// of its cells does not parse as a number.
inline CsvTable read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_row = true;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);

        if (first_data_row) {
            bool all_numeric = true;
            double tmp;
            for (const auto& c : cells)
                if (!parse_double(c, tmp)) { all_numeric = false; break; }
            if (!all_numeric) {
                for (const auto& c : cells) table.header.push_back(trim(c));
                width = cells.size();
                first_data_row = false;
                continue;
            }
        }

        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v;
            if (!parse_double(cells[j], v))
                throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                                         ": non-numeric cell in column " + std::to_string(j + 1));
            row.push_back(v);
        }
        if (first_data_row) {
            width = row.size();
            first_data_row = false;
        } else if (row.size() != width) {
            throw std::runtime_error(path + ": row " + std::to_string(line_no) + ": has " +
                                     std::to_string(row.size()) + " columns, expected " +
                                     std::to_string(width));
        }
        table.rows.push_back(std::move(row));
        table.row_numbers.push_back(line_no);
    }
    return table;
}

// Resolves a label column given by header name or numeric index.
inline std::size_t resolve_column(const CsvTable& table, const std::string& spec) {
    if (!table.header.empty()) {
        for (std::size_t i = 0; i < table.header.size(); ++i)
            if (table.header[i] == spec) return i;
    }
    char* end = nullptr;
    const long idx = std::strtol(spec.c_str(), &end, 10);
    if (end == spec.c_str() + spec.size() && idx >= 0) return static_cast<std::size_t>(idx);
    throw std::runtime_error("label column '" + spec + "' not found");
}

}  // namespace detail

// Loads a single labeled file. The label column (default: first column)
// holds 1 for positives and 0 for unlabeled; the remaining columns are the
// feature vector. Row order is preserved within each sample.
inline PUDataset load_csv(const std::string& path, const std::string& label_column = "0") {
    const auto table = detail::read_numeric_csv(path);
    const std::size_t label_idx = detail::resolve_column(table, label_column);

    PUDataset data;
    data.provenance = path;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (label_idx >= row.size())
            throw std::runtime_error(path + ": row " + std::to_string(table.row_numbers[r]) +
                                     ": label column out of range");
        Point p;
        p.reserve(row.size() - 1);
        for (std::size_t j = 0; j < row.size(); ++j)
            if (j != label_idx) p.push_back(row[j]);
        if (p.empty())
            throw std::runtime_error(path + ": row " + std::to_string(table.row_numbers[r]) +
                                     ": no feature columns");
        const double label = row[label_idx];
        if (label == 1.0)
            data.positives.push_back(std::move(p));
        else if (label == 0.0)
            data.unlabeled.push_back(std::move(p));
        else
            throw std::runtime_error(path + ": row " + std::to_string(table.row_numbers[r]) +
                                     ": label must be 0 or 1");
    }
    if (data.positives.empty()) throw std::runtime_error(path + ": positive sample is empty");
    if (data.unlabeled.empty()) throw std::runtime_error(path + ": unlabeled sample is empty");
    data.dim = data.positives.front().size();

    const auto findings = validate(data);
    if (!findings.empty()) throw std::runtime_error(path + ": " + findings.front());
    return data;
}

// Loads the two-file form: every row is a feature vector.
inline PUDataset load_csv_pair(const std::string& positives_path, const std::string& unlabeled_path) {
    const auto pos = detail::read_numeric_csv(positives_path);
    const auto unl = detail::read_numeric_csv(unlabeled_path);
    if (pos.rows.empty()) throw std::runtime_error(positives_path + ": positive sample is empty");
    if (unl.rows.empty()) throw std::runtime_error(unlabeled_path + ": unlabeled sample is empty");

    PUDataset data;
    data.provenance = positives_path + " + " + unlabeled_path;
    data.positives = pos.rows;
    data.unlabeled = unl.rows;
    data.dim = data.positives.front().size();
    if (!data.unlabeled.empty() && data.unlabeled.front().size() != data.dim)
        throw std::runtime_error(unlabeled_path + ": row " + std::to_string(unl.row_numbers.front()) +
                                 ": dimension differs from positive sample");

    const auto findings = validate(data);
    if (!findings.empty())
        throw std::runtime_error(positives_path + "/" + unlabeled_path + ": " + findings.front());
    return data;
}

// Formats a double with 17 significant digits (round-trip exact).
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_points_csv(const std::string& path, const std::vector<Point>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (const auto& p : points) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j) out << ',';
            out << format_value(p[j]);
        }
        out << '\n';
    }
}

// Writes the two-file form next to each other.
inline void save_csv(const PUDataset& data, const std::string& positives_path,
                     const std::string& unlabeled_path) {
    write_points_csv(positives_path, data.positives);
    write_points_csv(unlabeled_path, data.unlabeled);
}

}  // namespace alphamax

#endif  // ALPHAMAX_CSV_HPP
