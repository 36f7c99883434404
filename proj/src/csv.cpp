#include "optosync/csv.hpp"

#include "optosync/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace optosync {

void DataTable::add_row(std::initializer_list<double> vals) {
    if (vals.size() != columns.size())
        throw DimensionMismatch("row length does not match the column count");
    rows.emplace_back(vals);
}

int DataTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string to_csv(const DataTable& table) {
    std::string out;
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const DataTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << to_csv(table);
    if (!f) throw IoError("write failed for '" + path + "'");
}

DataTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    DataTable t;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header) {
            t.columns = cells;
            header = false;
        } else {
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) {
                try {
                    row.push_back(std::stod(c));
                } catch (const std::exception&) {
                    throw IoError("non-numeric cell '" + c + "' in " + path);
                }
            }
            if (row.size() != t.columns.size())
                throw IoError("ragged row in " + path);
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

} // namespace optosync
