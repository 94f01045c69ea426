// The `ksset 1` text format.
//
//   ksset 1                      format version, first significant line
//   name <identifier>
//   dim <d>                      d >= 3
//   field sqrt <k>               optional, square-free k, default 1
//   m-override <M>               optional, at most once
//   vec <id> <c1> ... <cd>       c = p | p/q | p/q:r/s  (the last is p/q + r/s*sqrt(k))
//   ctx <id> ... <id>            exactly d declared ids, mutually orthogonal
//
// '#' starts a comment, blank lines are ignored, LF and CRLF are accepted.
// Every diagnostic carries the 1-based line number it refers to.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ksi/model.hpp"

namespace ksi {

struct ValidationIssue;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

struct SetDocument {
  std::string source;                 // file name or "<string>"
  std::vector<std::string> lines;     // raw text, CR stripped
  KsSet set;
  std::vector<std::size_t> vector_lines;   // per vector index
  std::vector<std::size_t> context_lines;  // per context index
};

enum class Validation {
  full,            // structure, duplicates and orthogonality
  structure_only,  // grammar and references; see validate_orthogonality()
};

/// Parses and, by default, fully validates.
SetDocument parse_document(std::string_view text, std::string source = "<string>",
                           Validation validation = Validation::full);
KsSet parse_set(std::string_view text);

/// Canonical document: header, name, dim, field (if k > 1), m-override,
/// then vectors and contexts in declaration order. Byte-stable.
std::string serialize_set(const KsSet& set);

SetDocument read_set_file(const std::filesystem::path& path, Validation validation = Validation::full);

/// 1-based line of the declaration an issue refers to.
std::size_t issue_line(const SetDocument& doc, const ValidationIssue& issue);

/// Directory holding the bundled `<name>.ks` files.
std::filesystem::path catalog_dir();
std::vector<std::string> catalog_names();
/// Path of a bundled set; throws std::invalid_argument for unknown names.
std::filesystem::path catalog_path(std::string_view name);

/// Loads a bundled set. Unknown names throw std::invalid_argument; a bundled
/// file that fails to parse or validate throws std::logic_error.
KsSet load_catalog(std::string_view name);

}  // namespace ksi
