#ifndef KDVTBC_CSV_HPP
#define KDVTBC_CSV_HPP

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace kdvtbc::csv {

/// Shortest round-trip decimal form, capped at 17 significant digits.
std::string format(double v);

void write_header(std::ostream& os, std::span<const std::string> cols);
void write_row(std::ostream& os, std::span<const double> values);

} // namespace kdvtbc::csv

#endif
