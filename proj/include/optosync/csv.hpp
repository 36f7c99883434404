#ifndef OPTOSYNC_CSV_HPP
#define OPTOSYNC_CSV_HPP

#include <string>
#include <vector>

namespace optosync {

// Numeric table with named columns; the one interchange format every
// scenario writes. Serialized RFC-4180 style: comma separated, '.' decimal,
// one header row, LF line ends, %.12g formatting (deterministic).
struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals);
    int column_index(const std::string& name) const; // -1 when missing
};

std::string to_csv(const DataTable& table);
void write_csv(const DataTable& table, const std::string& path);
DataTable read_csv(const std::string& path);

std::string format_double(double v);

} // namespace optosync

#endif
