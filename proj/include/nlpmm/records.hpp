#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "nlpmm/types.hpp"

namespace nlpmm {

struct ParseOptions {
  char delimiter = ',';
  bool has_header = false;
  // Locations interned ahead of the observed ones; lets the caller pin the
  // universe when it is known up front.
  std::vector<std::string> declared_locations;
};

struct ParsedRecords {
  std::vector<PassageRecord> records;
  Interner objects;
  Interner locations;
};

// Input is delimiter-separated text, one record per line:
// object,location,timestamp. Timestamps are ISO-8601 (UTC) or raw epoch
// seconds. Throws ParseError with the offending line number.
ParsedRecords parse_records(std::istream& input, const ParseOptions& options = {});
ParsedRecords parse_records(std::string_view text, const ParseOptions& options = {});

// "2013-01-01T08:00:00" (optional trailing 'Z', 'T' or ' ' separator)
// -> epoch seconds. Plain integers pass through.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

}  // namespace nlpmm
