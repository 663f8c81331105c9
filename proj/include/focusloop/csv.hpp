#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace focusloop::csv {

std::string_view trim(std::string_view s);

// Splits one line on commas. Double-quoted fields may contain commas; "" is
// an escaped quote. Fields are trimmed.
std::vector<std::string> split_line(std::string_view line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// First non-blank line is the header. Throws InputRejected when a row's field
// count differs from the header's.
Table read(std::istream& in);
Table read_file(const std::string& path);

}  // namespace focusloop::csv
