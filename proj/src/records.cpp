#include "nlpmm/records.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "nlpmm/util.hpp"

namespace nlpmm {

namespace {

bool parse_int(std::string_view text, long long& out) {
  if (text.empty()) return false;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

bool parse_fixed_digits(std::string_view text, std::size_t pos, int width, int& out) {
  if (pos + width > text.size()) return false;
  out = 0;
  for (int i = 0; i < width; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    out = out * 10 + (c - '0');
  }
  return true;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  // strip a trailing Z
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) {
    text.remove_suffix(1);
  }
  long long raw = 0;
  if (parse_int(text, raw)) {
    if (raw < 0) throw ParseError(0, "negative timestamp");
    return raw;
  }
  // YYYY-MM-DD[T ]HH:MM:SS
  int year, month, day, hour, minute, second;
  bool ok = text.size() == 19 && parse_fixed_digits(text, 0, 4, year) &&
            text[4] == '-' && parse_fixed_digits(text, 5, 2, month) &&
            text[7] == '-' && parse_fixed_digits(text, 8, 2, day) &&
            (text[10] == 'T' || text[10] == ' ') &&
            parse_fixed_digits(text, 11, 2, hour) && text[13] == ':' &&
            parse_fixed_digits(text, 14, 2, minute) && text[16] == ':' &&
            parse_fixed_digits(text, 17, 2, second);
  if (!ok) throw ParseError(0, "unrecognized timestamp: " + std::string(text));

  namespace chr = std::chrono;
  chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                          chr::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) {
    throw ParseError(0, "invalid calendar time: " + std::string(text));
  }
  auto days = chr::sys_days{ymd}.time_since_epoch();
  Timestamp t = chr::duration_cast<chr::seconds>(days).count() +
                hour * 3600LL + minute * 60LL + second;
  if (t < 0) throw ParseError(0, "timestamp precedes the epoch");
  return t;
}

std::string format_timestamp(Timestamp t) {
  namespace chr = std::chrono;
  auto days = chr::floor<chr::days>(chr::seconds{t});
  chr::year_month_day ymd{chr::sys_days{days}};
  long long rest = t - chr::duration_cast<chr::seconds>(days).count();
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), rest / 3600, rest / 60 % 60,
                rest % 60);
  return buf;
}

ParsedRecords parse_records(std::istream& input, const ParseOptions& options) {
  ParsedRecords out;
  for (const std::string& name : options.declared_locations) {
    out.locations.intern(name);
  }

  std::string line;
  std::size_t line_no = 0;
  bool header_pending = options.has_header;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<std::string> fields = split(line, options.delimiter);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(line_no, "empty object or location id");
    }
    for (int f = 0; f < 2; ++f) {
      if (fields[f].find('\t') != std::string::npos) {
        throw ParseError(line_no, "tab character in id field");
      }
    }
    PassageRecord rec;
    rec.object = out.objects.intern(fields[0]);
    rec.location = out.locations.intern(fields[1]);
    try {
      rec.time = parse_timestamp(fields[2]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    out.records.push_back(rec);
  }
  return out;
}

ParsedRecords parse_records(std::string_view text, const ParseOptions& options) {
  std::istringstream stream{std::string(text)};
  return parse_records(stream, options);
}

}  // namespace nlpmm
