#include "smf/text_util.h"

#include "smf/error.h"

namespace smf {

std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(extra) >= text.size()) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool valid = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!valid) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::string utf8_encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    // ASCII Pc/Pd/Ps/Pe/Po. '$', '+', '<', '=', '>', '^', '`', '|', '~' are
    // symbols (S*), not punctuation.
    switch (cp) {
      case '!': case '"': case '#': case '%': case '&': case '\'': case '(':
      case ')': case '*': case ',': case '-': case '.': case '/': case ':':
      case ';': case '?': case '@': case '[': case '\\': case ']': case '_':
      case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  switch (cp) {
    case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7:
    case 0x00BB: case 0x00BF: case 0x037E: case 0x0387:
      return true;
    default:
      break;
  }
  if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, bullets
  if (cp >= 0x2030 && cp <= 0x2043) return true;
  if (cp >= 0x2045 && cp <= 0x2051) return true;
  if (cp >= 0x2053 && cp <= 0x205E) return true;
  if (cp >= 0x2E00 && cp <= 0x2E4F) return true;  // supplemental punctuation
  if (cp >= 0x3001 && cp <= 0x3003) return true;
  if (cp >= 0x3008 && cp <= 0x3011) return true;
  if (cp >= 0x3014 && cp <= 0x301F) return true;
  if (cp >= 0xFE10 && cp <= 0xFE19) return true;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
  if (cp >= 0xFE50 && cp <= 0xFE6B && cp != 0xFE62 && cp != 0xFE64 &&
      cp != 0xFE65 && cp != 0xFE66 && cp != 0xFE69) {
    return true;
  }
  if (cp >= 0xFF01 && cp <= 0xFF0F && cp != 0xFF04 && cp != 0xFF0B) return true;
  if (cp == 0xFF1A || cp == 0xFF1B || cp == 0xFF1F || cp == 0xFF20) return true;
  if (cp >= 0xFF3B && cp <= 0xFF3D) return true;
  if (cp == 0xFF3F || cp == 0xFF5B || cp == 0xFF5D) return true;
  if (cp >= 0xFF5F && cp <= 0xFF65) return true;
  return false;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if ((cp >= 0xC0 && cp <= 0xDE) && cp != 0xD7) return cp + 32;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 32;  // Greek
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;                  // Cyrillic
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  bool at_record_start = true;
  char ch;
  while (in_.get(ch)) {
    any = true;
    if (at_record_start && ch == '#') {
      std::string discard;
      std::getline(in_, discard);
      ++line_;
      any = false;
      continue;
    }
    if (at_record_start && (ch == '\n' || ch == '\r')) {
      if (ch == '\n') ++line_;
      any = false;
      continue;
    }
    at_record_start = false;
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      // dropped; CRLF handled by the '\n' branch
    } else if (ch == '\n') {
      ++line_;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParse,
                "unterminated quoted CSV field near line " + std::to_string(line_ + 1));
  }
  if (!any) return false;
  ++line_;
  fields.push_back(std::move(field));
  return true;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace smf
