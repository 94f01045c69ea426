#include "ksi/set_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "ksi/engine.hpp"

#ifndef KSI_CATALOG_DIR
#define KSI_CATALOG_DIR "catalog"
#endif

namespace ksi {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(message + " at line " + std::to_string(line)), line_(line), detail_(message) {}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.' || c == '+';
  });
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string_view digits = s;
  if (digits.front() == '+') digits.remove_prefix(1);
  std::int64_t value = 0;
  const char* first = digits.data();
  const char* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<Rational> parse_rational(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    auto p = parse_int(s);
    if (!p) return std::nullopt;
    return Rational(*p);
  }
  auto p = parse_int(s.substr(0, slash));
  auto q = parse_int(s.substr(slash + 1));
  if (!p || !q || *q <= 0) return std::nullopt;
  return Rational(*p, *q);
}

class Parser {
 public:
  Parser(std::string_view text, std::string source, Validation validation)
      : source_(std::move(source)), validation_(validation) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines_.emplace_back(line);
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  SetDocument parse() {
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      std::string_view line = lines_[i];
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      const auto tokens = split_tokens(line);
      if (tokens.empty()) continue;
      handle(i + 1, tokens);
    }
    std::size_t last = lines_.size();
    while (last > 1 && lines_[last - 1].empty()) --last;
    last = std::max<std::size_t>(last, 1);
    if (!header_seen_) throw ParseError(last, "missing 'ksset 1' header");
    if (!name_) throw ParseError(last, "missing 'name' directive");
    if (!dim_) throw ParseError(last, "missing 'dim' directive");

    std::vector<Context> contexts;
    contexts.reserve(context_ids_.size());
    for (const auto& members : context_ids_) contexts.push_back({members});

    std::optional<KsSet> set;
    try {
      set.emplace(*name_, *dim_, radicand_, vectors_, std::move(contexts), m_override_);
    } catch (const ModelError& e) {
      throw ParseError(last, e.what());
    }

    const ValidationReport report =
        validation_ == Validation::full ? validate_orthogonality(*set) : ValidationReport{};
    if (!report.valid()) {
      // Report the issue that appears earliest in the file.
      const ValidationIssue* first = nullptr;
      std::size_t first_line = 0;
      for (const auto& issue : report.issues) {
        const std::size_t line = issue.vector ? vector_lines_[*issue.vector] : context_lines_[*issue.context];
        if (!first || line < first_line) {
          first = &issue;
          first_line = line;
        }
      }
      throw ParseError(first_line, first->message);
    }

    return SetDocument{source_, std::move(lines_), std::move(*set), std::move(vector_lines_),
                       std::move(context_lines_)};
  }

 private:
  void handle(std::size_t line, const std::vector<std::string_view>& tokens) {
    const std::string_view directive = tokens[0];
    if (!header_seen_) {
      if (directive != "ksset") throw ParseError(line, "expected 'ksset 1' header");
      if (tokens.size() != 2 || tokens[1] != "1") throw ParseError(line, "unsupported format version");
      header_seen_ = true;
      return;
    }
    if (directive == "ksset") throw ParseError(line, "repeated 'ksset' header");
    if (directive == "name") return handle_name(line, tokens);
    if (directive == "dim") return handle_dim(line, tokens);
    if (directive == "field") return handle_field(line, tokens);
    if (directive == "m-override") return handle_override(line, tokens);
    if (directive == "vec") return handle_vec(line, tokens);
    if (directive == "ctx") return handle_ctx(line, tokens);
    throw ParseError(line, "unknown directive '" + std::string(directive) + "'");
  }

  void expect_args(std::size_t line, const std::vector<std::string_view>& tokens, std::size_t n) {
    if (tokens.size() != n + 1) {
      throw ParseError(line, "'" + std::string(tokens[0]) + "' takes " + std::to_string(n) + " argument(s)");
    }
  }

  void handle_name(std::size_t line, const std::vector<std::string_view>& tokens) {
    if (name_) throw ParseError(line, "repeated 'name'");
    expect_args(line, tokens, 1);
    if (!valid_identifier(tokens[1])) throw ParseError(line, "invalid set name");
    name_ = std::string(tokens[1]);
  }

  void handle_dim(std::size_t line, const std::vector<std::string_view>& tokens) {
    if (dim_) throw ParseError(line, "repeated 'dim'");
    expect_args(line, tokens, 1);
    auto d = parse_int(tokens[1]);
    if (!d || *d < 3 || *d > 64) throw ParseError(line, "dimension must be an integer in [3, 64]");
    dim_ = static_cast<int>(*d);
  }

  void handle_field(std::size_t line, const std::vector<std::string_view>& tokens) {
    if (field_seen_) throw ParseError(line, "repeated 'field'");
    if (!vectors_.empty()) throw ParseError(line, "'field' must precede every 'vec'");
    if (tokens.size() != 3 || tokens[1] != "sqrt") throw ParseError(line, "expected 'field sqrt <k>'");
    auto k = parse_int(tokens[2]);
    if (!k || !is_square_free(*k)) throw ParseError(line, "field radicand must be a square-free positive integer");
    radicand_ = *k;
    field_seen_ = true;
  }

  void handle_override(std::size_t line, const std::vector<std::string_view>& tokens) {
    if (m_override_) throw ParseError(line, "repeated 'm-override'");
    expect_args(line, tokens, 1);
    auto m = parse_int(tokens[1]);
    if (!m || *m < 0) throw ParseError(line, "m-override must be a non-negative integer");
    m_override_ = static_cast<std::uint64_t>(*m);
  }

  void handle_vec(std::size_t line, const std::vector<std::string_view>& tokens) {
    if (!dim_) throw ParseError(line, "'dim' must precede 'vec'");
    if (tokens.size() < 2 || !valid_identifier(tokens[1])) throw ParseError(line, "invalid vector id");
    const std::string id(tokens[1]);
    if (ids_.count(id)) throw ParseError(line, "duplicate vector id '" + id + "'");
    if (tokens.size() - 2 != static_cast<std::size_t>(*dim_)) {
      throw ParseError(line, "vector '" + id + "' has " + std::to_string(tokens.size() - 2) +
                                 " components, expected " + std::to_string(*dim_));
    }
    RayVector v{id, {}};
    for (std::size_t t = 2; t < tokens.size(); ++t) v.components.push_back(parse_component(line, tokens[t]));
    ids_.emplace(id, vectors_.size());
    vectors_.push_back(std::move(v));
    vector_lines_.push_back(line);
  }

  ExactScalar parse_component(std::size_t line, std::string_view token) {
    const auto colon = token.find(':');
    std::optional<Rational> a, b = Rational(0);
    if (colon == std::string_view::npos) {
      a = parse_rational(token);
    } else {
      a = parse_rational(token.substr(0, colon));
      b = parse_rational(token.substr(colon + 1));
    }
    if (!a || !b) throw ParseError(line, "malformed component '" + std::string(token) + "'");
    if (colon != std::string_view::npos && radicand_ == 1) {
      throw ParseError(line, "surd component '" + std::string(token) + "' requires 'field sqrt <k>'");
    }
    return ExactScalar(*a, *b, radicand_);
  }

  void handle_ctx(std::size_t line, const std::vector<std::string_view>& tokens) {
    if (!dim_) throw ParseError(line, "'dim' must precede 'ctx'");
    if (tokens.size() - 1 != static_cast<std::size_t>(*dim_)) {
      throw ParseError(line, "context has " + std::to_string(tokens.size() - 1) + " ids, expected " +
                                 std::to_string(*dim_));
    }
    std::vector<std::size_t> members;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      auto it = ids_.find(std::string(tokens[t]));
      if (it == ids_.end()) throw ParseError(line, "undeclared vector id '" + std::string(tokens[t]) + "'");
      members.push_back(it->second);
    }
    context_ids_.push_back(std::move(members));
    context_lines_.push_back(line);
  }

  std::string source_;
  Validation validation_;
  std::vector<std::string> lines_;
  bool header_seen_ = false;
  bool field_seen_ = false;
  std::optional<std::string> name_;
  std::optional<int> dim_;
  std::int64_t radicand_ = 1;
  std::optional<std::uint64_t> m_override_;
  std::vector<RayVector> vectors_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::vector<std::size_t>> context_ids_;
  std::vector<std::size_t> vector_lines_;
  std::vector<std::size_t> context_lines_;
};

}  // namespace

SetDocument parse_document(std::string_view text, std::string source, Validation validation) {
  return Parser(text, std::move(source), validation).parse();
}

std::size_t issue_line(const SetDocument& doc, const ValidationIssue& issue) {
  if (issue.vector) return doc.vector_lines.at(*issue.vector);
  if (issue.context) return doc.context_lines.at(*issue.context);
  return 0;
}

KsSet parse_set(std::string_view text) { return parse_document(text).set; }

std::string serialize_set(const KsSet& set) {
  std::ostringstream out;
  out << "ksset 1\n";
  out << "name " << set.name() << "\n";
  out << "dim " << set.dimension() << "\n";
  if (set.radicand() != 1) out << "field sqrt " << set.radicand() << "\n";
  if (set.m_override()) out << "m-override " << *set.m_override() << "\n";
  for (const RayVector& v : set.vectors()) {
    out << "vec " << v.id;
    for (const ExactScalar& c : v.components) out << ' ' << c.to_string();
    out << "\n";
  }
  for (const Context& ctx : set.contexts()) {
    out << "ctx";
    for (std::size_t m : ctx.members) out << ' ' << set.vector(m).id;
    out << "\n";
  }
  return out.str();
}

SetDocument read_set_file(const std::filesystem::path& path, Validation validation) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str(), path.string(), validation);
}

std::filesystem::path catalog_dir() { return std::filesystem::path(KSI_CATALOG_DIR); }

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(catalog_dir())) {
    if (entry.path().extension() == ".ks") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::filesystem::path catalog_path(std::string_view name) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown catalog set '" + std::string(name) + "'");
  }
  return catalog_dir() / (std::string(name) + ".ks");
}

KsSet load_catalog(std::string_view name) {
  const auto path = catalog_path(name);
  try {
    return read_set_file(path).set;
  } catch (const ParseError& e) {
    throw std::logic_error("bundled catalog file " + path.string() + " is invalid: " + e.what());
  }
}

}  // namespace ksi
