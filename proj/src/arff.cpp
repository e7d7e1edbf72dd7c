#include "asmeta/arff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "asmeta/error.hpp"

namespace asmeta::arff {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && lower(s.substr(0, prefix.size())) == lower(prefix);
}

struct Token {
  std::string text;
  bool quoted = false;
};

// Reads one possibly-quoted token starting at pos; stops at any char in `stops`
// when unquoted. Leaves pos just past the token.
Token read_token(std::string_view s, std::size_t& pos, std::size_t line, std::string_view stops) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  Token tok;
  if (pos < s.size() && (s[pos] == '\'' || s[pos] == '"')) {
    const char quote = s[pos++];
    tok.quoted = true;
    while (pos < s.size() && s[pos] != quote) {
      if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
      tok.text.push_back(s[pos++]);
    }
    if (pos >= s.size()) throw ArffError(line, "unterminated quote");
    ++pos;
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    return tok;
  }
  const auto start = pos;
  while (pos < s.size() && stops.find(s[pos]) == std::string_view::npos) ++pos;
  tok.text = std::string(trim(s.substr(start, pos - start)));
  return tok;
}

std::vector<Token> split_cells(std::string_view s, std::size_t line) {
  std::vector<Token> cells;
  std::size_t pos = 0;
  while (true) {
    cells.push_back(read_token(s, pos, line, ","));
    if (pos >= s.size()) break;
    if (s[pos] != ',') throw ArffError(line, "expected ',' between values");
    ++pos;
  }
  return cells;
}

double parse_number(const std::string& text, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    // from_chars rejects "inf"/"nan" spellings some writers emit
    const auto l = lower(text);
    if (l == "inf" || l == "infinity") return std::numeric_limits<double>::infinity();
    if (l == "-inf" || l == "-infinity") return -std::numeric_limits<double>::infinity();
    throw ArffError(line, "not a number: '" + text + "'");
  }
  return value;
}

Attribute parse_attribute(std::string_view rest, std::size_t line) {
  std::size_t pos = 0;
  Attribute attr;
  auto name = read_token(rest, pos, line, " \t{");
  if (name.text.empty()) throw ArffError(line, "attribute without a name");
  attr.name = name.text;
  const auto type = trim(rest.substr(pos));
  if (type.empty()) throw ArffError(line, "attribute '" + attr.name + "' without a type");
  if (type.front() == '{') {
    if (type.back() != '}') throw ArffError(line, "unterminated nominal value set");
    attr.kind = AttributeKind::Nominal;
    const auto inner = type.substr(1, type.size() - 2);
    if (!trim(inner).empty()) {
      for (auto& tok : split_cells(inner, line)) attr.nominal_values.push_back(tok.text);
    }
    return attr;
  }
  const auto t = lower(type);
  if (t == "numeric" || t == "real" || t == "integer") {
    attr.kind = AttributeKind::Numeric;
  } else if (t == "string") {
    attr.kind = AttributeKind::String;
  } else {
    throw ArffError(line, "unsupported attribute type '" + std::string(type) + "'");
  }
  return attr;
}

bool needs_quotes(std::string_view s) {
  if (s.empty() || s == "?") return true;
  return s.find_first_of(" \t,'\"%{}\\") != std::string_view::npos;
}

std::string quote(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::optional<std::size_t> Table::find_attribute(std::string_view name) const {
  const auto wanted = lower(name);
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (lower(attributes[i].name) == wanted) return i;
  }
  return std::nullopt;
}

Table parse(std::string_view text) {
  Table table;
  bool in_data = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (starts_with_ci(line, "@relation")) {
        std::size_t p = 0;
        const auto rest = line.substr(9);
        table.relation_name = read_token(rest, p, line_no, " \t").text;
      } else if (starts_with_ci(line, "@attribute")) {
        auto attr = parse_attribute(line.substr(10), line_no);
        table.attributes.push_back(std::move(attr));
      } else if (starts_with_ci(line, "@data")) {
        in_data = true;
      } else {
        throw ArffError(line_no, "unexpected header line");
      }
      continue;
    }

    if (line.front() == '{') throw ArffError(line_no, "sparse ARFF rows are not supported");
    auto cells = split_cells(line, line_no);
    if (cells.size() != table.attributes.size()) {
      throw ArffError(line_no, "expected " + std::to_string(table.attributes.size()) +
                                   " values, found " + std::to_string(cells.size()));
    }
    std::vector<Value> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& attr = table.attributes[c];
      const auto& cell = cells[c];
      if (!cell.quoted && cell.text == "?") {
        row.emplace_back(std::monostate{});
        continue;
      }
      switch (attr.kind) {
        case AttributeKind::Numeric:
          row.emplace_back(parse_number(cell.text, line_no));
          break;
        case AttributeKind::Nominal:
          if (std::find(attr.nominal_values.begin(), attr.nominal_values.end(), cell.text) ==
              attr.nominal_values.end()) {
            throw ArffError(line_no, "value '" + cell.text + "' not declared for attribute '" +
                                         attr.name + "'");
          }
          row.emplace_back(cell.text);
          break;
        case AttributeKind::String:
          row.emplace_back(cell.text);
          break;
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!in_data) throw ArffError(line_no, "missing @DATA section");
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ArffError& e) {
    throw ArffError(e.line(), e.reason(), path);
  }
}

std::string write(const Table& table) {
  std::ostringstream out;
  out << "@RELATION " << quote(table.relation_name) << "\n\n";
  for (const auto& attr : table.attributes) {
    out << "@ATTRIBUTE " << quote(attr.name) << ' ';
    switch (attr.kind) {
      case AttributeKind::Numeric: out << "NUMERIC"; break;
      case AttributeKind::String: out << "STRING"; break;
      case AttributeKind::Nominal: {
        out << '{';
        for (std::size_t i = 0; i < attr.nominal_values.size(); ++i) {
          if (i) out << ',';
          out << quote(attr.nominal_values[i]);
        }
        out << '}';
        break;
      }
    }
    out << '\n';
  }
  out << "\n@DATA\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      const auto& v = row[c];
      if (is_missing(v)) {
        out << '?';
      } else if (const auto* d = std::get_if<double>(&v)) {
        out << format_number(*d);
      } else {
        out << quote(std::get<std::string>(v));
      }
    }
    out << '\n';
  }
  return out.str();
}

void write_file(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << write(table);
}

}  // namespace asmeta::arff
