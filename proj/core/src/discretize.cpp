#include "shockflow/discretize.hpp"

#include "shockflow/error.hpp"

#include <cmath>

namespace shockflow {

DiscreteSeries derivative_sign_encode(std::span<const double> values, double epsilon)
{
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
    if (values.size() < 2) throw InputError("discretize", "series too short");
    DiscreteSeries out;
    out.symbols.reserve(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        out.symbols.push_back(d > epsilon ? kUp : (std::abs(d) <= epsilon ? kFlat : kDown));
    }
    return out;
}

DiscreteSeries derivative_sign_encode(const TimeSeries& series, double epsilon)
{
    if (!series.uniform()) throw InputError("discretize", "nonuniform series");
    auto out = derivative_sign_encode(std::span<const double>(series.values), epsilon);
    out.name = series.name;
    out.source_bin_width_s = series.bin_width_s;
    return out;
}

} // namespace shockflow
