#pragma once

#include "calf/cost.hpp"
#include "calf/syntax.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace calf {

enum class Severity { Error };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string message;
  std::string hint; // empty when there is nothing useful to add
};

// One `def name : T = term`. For a computation-typed def the stored type is
// U-wrapped, since contexts hold value types; the term stays as written.
struct Decl {
  std::string name;
  Type type;
  Term term;
  Span span;
};

// A parsed program. Terms are scoped over the defs that precede them: inside
// decl k and in main, def j < k appears as a term variable (innermost = the
// most recent def).
struct SourceFile {
  std::vector<Decl> decls;
  Type main_type; // computation type as written
  Term main;

  // main (or its type) with every def inlined; closed, so it stands alone.
  Term linked_main() const;
  Type linked_main_type() const;
};

struct ParseResult {
  std::optional<SourceFile> file;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return file.has_value(); }
};

ParseResult parse(std::string_view source, const CostModel& model);

// Parses a standalone closed term / type; nullopt on failure (the first
// diagnostic lands in *diags when given). Convenience for tests and tooling.
std::optional<Term> parse_term_text(std::string_view text, const CostModel& model,
                                    std::vector<Diagnostic>* diags = nullptr);
std::optional<Type> parse_type_text(std::string_view text, const CostModel& model,
                                    std::vector<Diagnostic>* diags = nullptr);

// Canonical concrete syntax. Binder names are synthesized as x0, x1, ... by
// term-binder depth and z0, z1, ... by phase-binder depth, so
// parse(pretty(t)) is alpha-equal to t for every well-scoped closed t.
std::string pretty(const Term& t);
std::string pretty(const Type& t);
std::string pretty(const CostExpr& c);

// 1-based line and column of a byte offset.
std::pair<int, int> line_col_at(std::string_view source, std::size_t offset);

// "path:line:col: error: message" plus the offending source line and a caret.
std::string render_diagnostic(std::string_view source, const Diagnostic& d,
                              std::string_view path = "<input>");

} // namespace calf
