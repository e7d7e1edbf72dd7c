#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace asmeta::arff {

enum class AttributeKind { Numeric, Nominal, String };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::Numeric;
  std::vector<std::string> nominal_values;  // only for Nominal

  bool operator==(const Attribute&) const = default;
};

/// A cell is MISSING (monostate), a number, or text (nominal or string).
using Value = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Value& v) { return std::holds_alternative<std::monostate>(v); }

struct Table {
  std::string relation_name;
  std::vector<Attribute> attributes;
  std::vector<std::vector<Value>> rows;

  /// Case-insensitive attribute lookup.
  std::optional<std::size_t> find_attribute(std::string_view name) const;

  bool operator==(const Table&) const = default;
};

/// Parses the dense ARFF subset used by ASlib. Throws ArffError.
Table parse(std::string_view text);

Table read_file(const std::string& path);

/// Serializes so that parse(write(t)) == t.
std::string write(const Table& table);

void write_file(const Table& table, const std::string& path);

}  // namespace asmeta::arff
