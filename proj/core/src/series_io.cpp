#include "shockflow/series_io.hpp"

#include "shockflow/error.hpp"
#include "shockflow/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace shockflow {

bool SeriesTable::symbolic() const
{
    const auto it = meta.find("kind");
    return it != meta.end() && it->second == "symbols";
}

std::size_t SeriesTable::column_index(const std::string& name) const
{
    for (std::size_t i = 1; i < columns.size(); ++i) {
        if (columns[i] == name) return i - 1;
    }
    throw InputError("series", "no column '" + name + "'");
}

TimeSeries SeriesTable::time_series(std::size_t value_column) const
{
    TimeSeries s;
    s.name = columns.at(value_column + 1);
    s.origin = time.empty() ? 0 : time.front();
    s.bin_width_s = time.size() >= 2 ? time[1] - time[0] : 1;
    if (s.bin_width_s < 1) throw InputError("series", "time column must increase");
    for (std::size_t i = 1; i < time.size(); ++i) {
        if (time[i] - time[i - 1] != s.bin_width_s) throw InputError("series", "time column is not uniformly spaced");
    }
    s.values = values.at(value_column);
    s.counts.assign(s.values.size(), 1);
    return s;
}

DiscreteSeries SeriesTable::discrete_series(std::size_t value_column) const
{
    DiscreteSeries d;
    d.name = columns.at(value_column + 1);
    d.source_bin_width_s = time.size() >= 2 ? time[1] - time[0] : 1;
    for (double v : values.at(value_column)) {
        if (v != 1.0 && v != 2.0 && v != 3.0) throw InputError("series", "symbol column holds a value outside {1,2,3}");
        d.symbols.push_back(static_cast<std::uint8_t>(v));
    }
    return d;
}

SeriesTable read_series_table(std::istream& in)
{
    SeriesTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto trimmed = io::trim(line);
        if (trimmed.empty()) continue;
        if (trimmed.front() == '#') {
            const auto body = io::trim(trimmed.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string_view::npos) {
                t.meta[std::string(io::trim(body.substr(0, eq)))] = std::string(io::trim(body.substr(eq + 1)));
            }
            continue;
        }
        const auto fields = io::split(trimmed, ',');
        if (t.columns.empty()) {
            if (fields.size() < 2) throw InputError("series", "header needs a time column and a value column");
            for (auto f : fields) t.columns.emplace_back(io::trim(f));
            t.values.resize(t.columns.size() - 1);
            continue;
        }
        if (fields.size() != t.columns.size()) {
            throw InputError("series", "line " + std::to_string(line_no) + ": expected " +
                                           std::to_string(t.columns.size()) + " fields");
        }
        const auto time = io::parse_int(fields[0]);
        if (!time) throw InputError("series", "line " + std::to_string(line_no) + ": bad time value");
        t.time.push_back(*time);
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const auto v = io::parse_double(fields[c]);
            if (!v || !std::isfinite(*v)) {
                throw InputError("series", "line " + std::to_string(line_no) + ": bad value");
            }
            t.values[c - 1].push_back(*v);
        }
    }
    if (t.columns.empty()) throw InputError("series", "empty series file");
    return t;
}

SeriesTable read_series_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("series", "cannot open '" + path.string() + "'");
    return read_series_table(in);
}

void write_series_csv(std::ostream& out, const TimeSeries& series)
{
    write_series_csv(out, std::vector<const TimeSeries*>{&series});
}

void write_series_csv(std::ostream& out, const std::vector<const TimeSeries*>& columns)
{
    if (columns.empty()) return;
    out << "bin_start_s";
    for (const auto* c : columns) out << ',' << c->name;
    out << '\n';
    const auto& first = *columns.front();
    for (std::size_t i = 0; i < first.size(); ++i) {
        out << first.bin_start(i);
        for (const auto* c : columns) out << ',' << io::format_double(c->values.at(i));
        out << '\n';
    }
}

} // namespace shockflow
