#include "kdvtbc/csv.hpp"

#include <cstdio>

namespace kdvtbc::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_header(std::ostream& os, std::span<const std::string> cols) {
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << "\n";
}

void write_row(std::ostream& os, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? "," : "") << format(values[i]);
    os << "\n";
}

} // namespace kdvtbc::csv
