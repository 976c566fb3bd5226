#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace smf {

/// Decodes UTF-8 into code points; invalid bytes map to U+FFFD.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);

/// Punctuation test covering ASCII, Latin-1 and the common Unicode
/// punctuation blocks (General Punctuation, CJK Symbols, fullwidth forms).
bool is_punctuation(char32_t cp);

/// ASCII, Latin-1 and basic Greek/Cyrillic lowercase mapping.
char32_t to_lower(char32_t cp);

/// RFC 4180 CSV reader. Lines starting with '#' before a record are skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Reads the next record into `fields`; false at end of input.
  bool next(std::vector<std::string>& fields);
  int line() const noexcept { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace smf
