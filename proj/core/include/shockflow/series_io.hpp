#pragma once

#include "shockflow/series.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace shockflow {

// Comma-separated table with a header row. Leading "# key=value" lines are metadata;
// "# kind=symbols" marks columns holding derivative-sign symbols rather than raw values.
struct SeriesTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;   // columns[0] is the time column
    std::vector<std::int64_t> time;
    std::vector<std::vector<double>> values;  // one vector per non-time column

    bool symbolic() const;
    std::size_t column_index(const std::string& name) const;  // throws InputError if absent
    TimeSeries time_series(std::size_t value_column) const;
    DiscreteSeries discrete_series(std::size_t value_column) const;
};

SeriesTable read_series_table(std::istream& in);
SeriesTable read_series_table(const std::filesystem::path& path);

// bin_start_s,<name>
void write_series_csv(std::ostream& out, const TimeSeries& series);
// bin_start_s,<name>... for equal-length series on the same grid.
void write_series_csv(std::ostream& out, const std::vector<const TimeSeries*>& columns);

} // namespace shockflow
