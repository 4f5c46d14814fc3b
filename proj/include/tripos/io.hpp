#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tripos/doctrine.hpp"

namespace tripos {

/// Instance file error. `where` is a JSON pointer into the document; when
/// parsing from text it is "line L, column C" followed by the pointer in
/// parentheses (just the position for syntax errors).
struct ParseError : std::runtime_error {
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where(std::move(where)) {}
  std::string where;
};

/// Reads an instance document. Throws ParseError.
Doctrine parse_instance(const std::string& text);
Doctrine parse_instance(const json& doc);

/// Canonical document: sorted keys, sorted ids, identity tables omitted.
json serialize_instance(const Doctrine& d);
/// Canonical text (two-space indent, trailing newline).
std::string dump_instance(const Doctrine& d);

/// FNV-1a over the canonical text, as 16 hex digits.
std::string instance_hash(const Doctrine& d);
std::string fnv1a_hex(const std::string& text);

/// Loads "catalog:<id>" or a file path. Throws ParseError or
/// std::invalid_argument.
Doctrine load_instance(const std::string& spec);

}  // namespace tripos
