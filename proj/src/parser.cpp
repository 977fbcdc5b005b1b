#include "calf/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace calf {
namespace {

constexpr std::uint64_t kMaxNumeralLiteral = 1'000'000;

enum class Tok {
  Ident, Nat,
  KwDef, KwMain, KwNat, KwU, KwSig, KwEq, KwOp, KwCl, KwF, KwPi,
  KwSuc, KwRet, KwBind, KwStep, KwSplit, KwAs, KwIn, KwRefl, KwSeal,
  KwUnseal, KwAt, KwPlam, KwPapp, KwInd, KwZero,
  Colon, Equal, LArrow, Semi, LBrace, RBrace, LParen, RParen,
  Comma, Dot, Backslash, Star, Bar, FatArrow,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string_view text;
  Span span;
  std::uint64_t nat = 0;
};

struct ParseFail {
  Diagnostic d;
};

[[noreturn]] void fail(Span sp, std::string msg, std::string hint = "") {
  throw ParseFail{Diagnostic{Severity::Error, sp, std::move(msg), std::move(hint)}};
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + std::string(t.text) + "'";
    case Tok::Nat: return "numeral '" + std::string(t.text) + "'";
    case Tok::Eof: return "end of input";
    default: return "'" + std::string(t.text) + "'";
  }
}

constexpr std::pair<std::string_view, Tok> kKeywords[] = {
    {"def", Tok::KwDef},       {"main", Tok::KwMain},   {"nat", Tok::KwNat},
    {"U", Tok::KwU},           {"Sig", Tok::KwSig},     {"eq", Tok::KwEq},
    {"Op", Tok::KwOp},         {"Cl", Tok::KwCl},       {"F", Tok::KwF},
    {"Pi", Tok::KwPi},         {"suc", Tok::KwSuc},     {"ret", Tok::KwRet},
    {"bind", Tok::KwBind},     {"step", Tok::KwStep},   {"split", Tok::KwSplit},
    {"as", Tok::KwAs},         {"in", Tok::KwIn},       {"refl", Tok::KwRefl},
    {"seal", Tok::KwSeal},     {"unseal", Tok::KwUnseal}, {"at", Tok::KwAt},
    {"plam", Tok::KwPlam},     {"papp", Tok::KwPapp},   {"ind", Tok::KwInd},
    {"zero", Tok::KwZero},
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    auto lo = static_cast<std::uint32_t>(pos_);
    if (pos_ >= src_.size()) return Token{Tok::Eof, {}, Span{lo, lo}, 0};
    char c = src_[pos_];
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      return ident_token(lo);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t value = 0;
      bool overflow = false;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        std::uint64_t digit = static_cast<std::uint64_t>(src_[pos_] - '0');
        if (value > (UINT64_MAX - digit) / 10) overflow = true;
        if (!overflow) value = value * 10 + digit;
        ++pos_;
      }
      Token t = make(Tok::Nat, lo);
      if (overflow) fail(t.span, "numeral literal too large");
      t.nat = value;
      return t;
    }
    ++pos_;
    switch (c) {
      case ':': return make(Tok::Colon, lo);
      case '=':
        if (peek() == '>') { ++pos_; return make(Tok::FatArrow, lo); }
        return make(Tok::Equal, lo);
      case '<':
        if (peek() == '-') { ++pos_; return make(Tok::LArrow, lo); }
        fail(Span{lo, lo + 1}, "unexpected character '<'");
      case ';': return make(Tok::Semi, lo);
      case '{': return make(Tok::LBrace, lo);
      case '}': return make(Tok::RBrace, lo);
      case '(': return make(Tok::LParen, lo);
      case ')': return make(Tok::RParen, lo);
      case ',': return make(Tok::Comma, lo);
      case '.': return make(Tok::Dot, lo);
      case '\\': return make(Tok::Backslash, lo);
      case '*': return make(Tok::Star, lo);
      case '|': return make(Tok::Bar, lo);
      default:
        fail(Span{lo, lo + 1}, std::string("unexpected character '") + c + "'");
    }
  }

  // Raw slice from the current position up to (not including) the next '}'.
  // Valid right after a '{' token has been produced; the following next()
  // yields that '}'.
  std::pair<std::string_view, Span> raw_until_rbrace() {
    std::size_t lo = pos_;
    while (pos_ < src_.size() && src_[pos_] != '}') ++pos_;
    if (pos_ >= src_.size())
      fail(Span{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(src_.size())},
           "unterminated cost literal: missing '}'");
    Span sp{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(pos_)};
    return {src_.substr(lo, pos_ - lo), sp};
  }

private:
  Token make(Tok k, std::uint32_t lo) {
    Span sp{lo, static_cast<std::uint32_t>(pos_)};
    return Token{k, src_.substr(lo, pos_ - lo), sp, 0};
  }

  Token ident_token(std::uint32_t lo) {
    Token t = make(Tok::Ident, lo);
    for (const auto& [kw, kind] : kKeywords)
      if (t.text == kw) {
        t.kind = kind;
        break;
      }
    return t;
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void skip_trivia() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  Parser(std::string_view src, const CostModel& model) : lex_(src), model_(model) {
    cur_ = lex_.next();
  }

  SourceFile parse_file() {
    std::vector<Decl> decls;
    while (at(Tok::KwDef)) {
      std::uint32_t lo = cur_.span.lo;
      advance();
      Token name = expect(Tok::Ident, "a definition name");
      std::string nm(name.text);
      for (const auto& seen : decl_names_)
        if (seen == nm) fail(name.span, "duplicate definition " + nm);
      expect(Tok::Colon, "':'");
      auto [dty, is_comp] = parse_any_type();
      expect(Tok::Equal, "'='");
      Term body = parse_term();
      Type stored = is_comp ? ty_u(dty, dty.span()) : dty;
      decls.push_back(Decl{std::move(nm), stored, body, spanned(lo)});
      decl_names_.push_back(decls.back().name);
    }
    expect(Tok::KwMain, "'def' or 'main'");
    expect(Tok::Colon, "':'");
    std::uint32_t tylo = cur_.span.lo;
    auto [mty, is_comp] = parse_any_type();
    if (!is_comp)
      fail(spanned(tylo), "main must have a computation type",
           "computation types start with F or Pi");
    expect(Tok::Equal, "'='");
    Term m = parse_term();
    expect(Tok::Eof, "end of input");
    return SourceFile{std::move(decls), mty, m};
  }

  Term parse_closed_term() {
    Term t = parse_term();
    expect(Tok::Eof, "end of input");
    return t;
  }

  Type parse_closed_type() {
    Type t = parse_any_type().first;
    expect(Tok::Eof, "end of input");
    return t;
  }

private:
  struct ScopeEntry {
    std::string name;
    bool is_phase;
  };

  void advance() {
    prev_hi_ = cur_.span.hi;
    cur_ = lex_.next();
  }

  bool at(Tok k) const { return cur_.kind == k; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(cur_.span, std::string("expected ") + what + ", found " + describe(cur_));
    Token t = cur_;
    advance();
    return t;
  }

  Span spanned(std::uint32_t lo) const { return Span{lo, prev_hi_}; }

  void push_var(const Token& name, bool is_phase) {
    scope_.push_back(ScopeEntry{std::string(name.text), is_phase});
  }

  Term resolve_ident(const Token& tok) {
    std::string name(tok.text);
    int term_depth_above = 0;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) {
        if (it->is_phase)
          fail(tok.span, "identifier " + name + " names a phase assumption, not a term",
               "names bound by plam or by the * branch of unseal do not stand for values");
        return mk_var(term_depth_above, tok.span);
      }
      if (!it->is_phase) ++term_depth_above;
    }
    for (std::size_t k = decl_names_.size(); k-- > 0;) {
      if (decl_names_[k] == name)
        return mk_var(term_depth_above + static_cast<int>(decl_names_.size() - 1 - k), tok.span);
    }
    fail(tok.span, "unbound identifier " + name);
  }

  // ---- types ----

  std::pair<Type, bool> parse_any_type() {
    if (at(Tok::KwF) || at(Tok::KwPi)) return {parse_ctype(), true};
    if (at(Tok::LParen)) {
      std::uint32_t lo = cur_.span.lo;
      advance();
      auto inner = parse_any_type();
      expect(Tok::RParen, "')'");
      return {inner.first.with_span(spanned(lo)), inner.second};
    }
    return {parse_vtype(), false};
  }

  Type parse_ctype() {
    std::uint32_t lo = cur_.span.lo;
    switch (cur_.kind) {
      case Tok::KwF: {
        advance();
        Type a = parse_vtype();
        return ty_f(a, spanned(lo));
      }
      case Tok::KwPi: {
        advance();
        expect(Tok::LParen, "'('");
        Token x = expect(Tok::Ident, "a variable name");
        expect(Tok::Colon, "':'");
        Type dom = parse_vtype();
        expect(Tok::RParen, "')'");
        push_var(x, false);
        Type cod = parse_ctype();
        scope_.pop_back();
        return ty_pi(dom, cod, spanned(lo));
      }
      case Tok::LParen: {
        advance();
        auto [t, is_comp] = parse_any_type();
        expect(Tok::RParen, "')'");
        if (!is_comp)
          fail(spanned(lo), "expected a computation type",
               "computation types start with F or Pi");
        return t.with_span(spanned(lo));
      }
      default:
        fail(cur_.span, "expected a computation type, found " + describe(cur_));
    }
  }

  Type parse_vtype() {
    std::uint32_t lo = cur_.span.lo;
    switch (cur_.kind) {
      case Tok::KwNat:
        advance();
        return ty_nat(spanned(lo));
      case Tok::KwU: {
        advance();
        Type c = parse_ctype();
        return ty_u(c, spanned(lo));
      }
      case Tok::KwSig: {
        advance();
        expect(Tok::LParen, "'('");
        Token x = expect(Tok::Ident, "a variable name");
        expect(Tok::Colon, "':'");
        Type fst = parse_vtype();
        expect(Tok::RParen, "')'");
        push_var(x, false);
        Type snd = parse_vtype();
        scope_.pop_back();
        return ty_sig(fst, snd, spanned(lo));
      }
      case Tok::KwEq: {
        advance();
        expect(Tok::LParen, "'('");
        Type t = parse_vtype();
        expect(Tok::Comma, "','");
        Term l = parse_term();
        expect(Tok::Comma, "','");
        Term r = parse_term();
        expect(Tok::RParen, "')'");
        return ty_eq(t, l, r, spanned(lo));
      }
      case Tok::KwOp: {
        advance();
        Type a = parse_vtype();
        return ty_op(a, spanned(lo));
      }
      case Tok::KwCl: {
        advance();
        Type a = parse_vtype();
        return ty_cl(a, spanned(lo));
      }
      case Tok::LParen: {
        advance();
        auto [t, is_comp] = parse_any_type();
        expect(Tok::RParen, "')'");
        if (is_comp)
          fail(spanned(lo), "expected a value type, found a computation type",
               "wrap a computation type in U to use it as a value type");
        return t.with_span(spanned(lo));
      }
      default:
        fail(cur_.span, "expected a type, found " + describe(cur_));
    }
  }

  // ---- terms ----

  Term parse_term() {
    std::uint32_t lo = cur_.span.lo;
    switch (cur_.kind) {
      case Tok::Backslash: {
        advance();
        Token x = expect(Tok::Ident, "a variable name");
        expect(Tok::Dot, "'.'");
        push_var(x, false);
        Term body = parse_term();
        scope_.pop_back();
        return mk_lam(body, spanned(lo));
      }
      case Tok::KwBind: {
        advance();
        Token x = expect(Tok::Ident, "a variable name");
        expect(Tok::LArrow, "'<-'");
        Term scrut = parse_term();
        expect(Tok::Semi, "';'");
        push_var(x, false);
        Term body = parse_term();
        scope_.pop_back();
        return mk_bind(scrut, body, spanned(lo));
      }
      case Tok::KwStep: {
        advance();
        if (!at(Tok::LBrace))
          fail(cur_.span, "expected '{' after step, found " + describe(cur_));
        auto [raw, rawsp] = lex_.raw_until_rbrace();
        advance(); // now at the '}'
        advance(); // past it
        CostExpr c = cost_from_text(raw, rawsp);
        Term body = parse_term();
        return mk_step(c, body, spanned(lo));
      }
      case Tok::KwSplit: {
        advance();
        Term scrut = parse_term();
        expect(Tok::KwAs, "'as'");
        expect(Tok::LParen, "'('");
        Token x = expect(Tok::Ident, "a variable name");
        expect(Tok::Comma, "','");
        Token y = expect(Tok::Ident, "a variable name");
        expect(Tok::RParen, "')'");
        expect(Tok::KwIn, "'in'");
        push_var(x, false);
        push_var(y, false);
        Term body = parse_term();
        scope_.pop_back();
        scope_.pop_back();
        return mk_split(scrut, body, spanned(lo));
      }
      case Tok::KwUnseal: {
        advance();
        Term scrut = parse_term();
        expect(Tok::KwAt, "'at'");
        Token m = expect(Tok::Ident, "a variable name");
        expect(Tok::Dot, "'.'");
        push_var(m, false);
        Type motive = parse_ctype();
        scope_.pop_back();
        expect(Tok::LBrace, "'{'");
        expect(Tok::KwSeal, "'seal'");
        Token a = expect(Tok::Ident, "a variable name");
        expect(Tok::FatArrow, "'=>'");
        push_var(a, false);
        Term eta = parse_term();
        scope_.pop_back();
        expect(Tok::Bar, "'|'");
        expect(Tok::Star, "'*'");
        Token z = expect(Tok::Ident, "a variable name");
        expect(Tok::FatArrow, "'=>'");
        push_var(z, true);
        Term star = parse_term();
        scope_.pop_back();
        expect(Tok::RBrace, "'}'");
        return mk_unseal_ind(scrut, motive, eta, star, spanned(lo));
      }
      case Tok::KwPlam: {
        advance();
        Token z = expect(Tok::Ident, "a variable name");
        expect(Tok::Dot, "'.'");
        push_var(z, true);
        Term body = parse_term();
        scope_.pop_back();
        return mk_plam(body, spanned(lo));
      }
      case Tok::KwInd: {
        advance();
        Term scrut = parse_term();
        expect(Tok::KwAt, "'at'");
        Token m = expect(Tok::Ident, "a variable name");
        expect(Tok::Dot, "'.'");
        push_var(m, false);
        Type motive = parse_ctype();
        scope_.pop_back();
        expect(Tok::LBrace, "'{'");
        expect(Tok::KwZero, "'zero'");
        expect(Tok::FatArrow, "'=>'");
        Term zb = parse_term();
        expect(Tok::Bar, "'|'");
        expect(Tok::KwSuc, "'suc'");
        Token n = expect(Tok::Ident, "a variable name");
        expect(Tok::Comma, "','");
        Token ih = expect(Tok::Ident, "a variable name");
        expect(Tok::FatArrow, "'=>'");
        push_var(n, false);
        push_var(ih, false);
        Term sb = parse_term();
        scope_.pop_back();
        scope_.pop_back();
        expect(Tok::RBrace, "'}'");
        return mk_ind(scrut, motive, zb, sb, spanned(lo));
      }
      case Tok::KwSuc: {
        advance();
        Term a = parse_term();
        return mk_suc(a, spanned(lo));
      }
      case Tok::KwRet: {
        advance();
        Term a = parse_term();
        return mk_ret(a, spanned(lo));
      }
      case Tok::KwSeal: {
        advance();
        Term a = parse_term();
        return mk_seal(a, spanned(lo));
      }
      case Tok::KwPapp: {
        advance();
        Term a = parse_term();
        return mk_pap(a, spanned(lo));
      }
      default:
        return parse_app();
    }
  }

  bool starts_atom() const {
    switch (cur_.kind) {
      case Tok::Ident:
      case Tok::Nat:
      case Tok::KwRefl:
      case Tok::Star:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Term parse_app() {
    std::uint32_t lo = cur_.span.lo;
    if (!starts_atom()) fail(cur_.span, "expected a term, found " + describe(cur_));
    Term t = parse_atom();
    while (starts_atom()) {
      Term a = parse_atom();
      t = mk_ap(t, a, spanned(lo));
    }
    return t;
  }

  Term parse_atom() {
    std::uint32_t lo = cur_.span.lo;
    switch (cur_.kind) {
      case Tok::Ident: {
        Token t = cur_;
        advance();
        return resolve_ident(t);
      }
      case Tok::Nat: {
        Token t = cur_;
        advance();
        if (t.nat > kMaxNumeralLiteral)
          fail(t.span, "numeral literal too large to expand (limit " +
                           std::to_string(kMaxNumeralLiteral) + ")");
        return numeral(t.nat).with_span(t.span);
      }
      case Tok::KwRefl:
        advance();
        return mk_refl(spanned(lo));
      case Tok::Star:
        advance();
        return mk_star(spanned(lo));
      case Tok::LParen: {
        advance();
        Term a = parse_term();
        if (at(Tok::Comma)) {
          advance();
          Term b = parse_term();
          expect(Tok::RParen, "')'");
          return mk_pair(a, b, spanned(lo));
        }
        expect(Tok::RParen, "')'");
        return a.with_span(spanned(lo));
      }
      default:
        fail(cur_.span, "expected a term, found " + describe(cur_));
    }
  }

  // ---- costs ----

  CostExpr cost_from_text(std::string_view raw, Span rawsp) {
    // Split on '+' outside parens; each piece is monoid-specific element text,
    // except that a bare 0 always means the monoid identity.
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      char ch = raw[i];
      if (ch == '(') ++depth;
      else if (ch == ')') --depth;
      else if (ch == '+' && depth == 0) {
        parts.push_back(raw.substr(start, i - start));
        start = i + 1;
      }
    }
    parts.push_back(raw.substr(start));

    std::optional<CostExpr> acc;
    for (std::string_view part : parts) {
      Span psp{rawsp.lo + static_cast<std::uint32_t>(part.data() - raw.data()),
               rawsp.lo + static_cast<std::uint32_t>(part.data() - raw.data() + part.size())};
      std::string_view body = trimmed(part);
      if (body.empty()) fail(psp, "empty cost literal");
      CostExpr piece = CostExpr::zero();
      if (body != "0") {
        auto e = model_.parse_elem(body);
        if (!e)
          fail(psp, "cost literal '" + std::string(body) + "' does not fit cost model " +
                        model_.name());
        piece = CostExpr::lit(*e);
      }
      acc = acc ? CostExpr::add(std::move(*acc), std::move(piece)) : std::move(piece);
    }
    return *acc;
  }

  Lexer lex_;
  const CostModel& model_;
  Token cur_;
  std::uint32_t prev_hi_ = 0;
  std::vector<ScopeEntry> scope_;
  std::vector<std::string> decl_names_;
};

// ---- pretty printing ----

struct Printer {
  std::string out;

  static bool is_atom(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::Zero:
      case TermKind::Refl:
      case TermKind::Star:
      case TermKind::Pair:
        return true;
      default:
        return false;
    }
  }

  static std::string term_name(int depth) { return "x" + std::to_string(depth); }
  static std::string phase_name(int depth) { return "z" + std::to_string(depth); }

  void atom(const Term& t, int d, int p) {
    if (is_atom(t)) {
      term(t, d, p);
    } else {
      out += '(';
      term(t, d, p);
      out += ')';
    }
  }

  void app_head(const Term& t, int d, int p) {
    if (is_atom(t) || t.kind() == TermKind::Ap) {
      term(t, d, p);
    } else {
      out += '(';
      term(t, d, p);
      out += ')';
    }
  }

  void term(const Term& t, int d, int p) {
    std::visit(
        overloaded{
            [&](const tm::Var& v) {
              if (v.index < d) out += term_name(d - 1 - v.index);
              else out += "#" + std::to_string(v.index - d); // free; diagnostics only
            },
            [&](const tm::Zero&) { out += '0'; },
            [&](const tm::Suc& n) {
              out += "suc ";
              atom(n.arg, d, p);
            },
            [&](const tm::Ret& n) {
              out += "ret ";
              atom(n.arg, d, p);
            },
            [&](const tm::Bind& n) {
              out += "bind " + term_name(d) + " <- ";
              term(n.scrut, d, p);
              out += "; ";
              term(n.body, d + 1, p);
            },
            [&](const tm::Step& n) {
              out += "step{";
              cost(n.cost);
              out += "} ";
              term(n.body, d, p);
            },
            [&](const tm::Lam& n) {
              out += "\\" + term_name(d) + ". ";
              term(n.body, d + 1, p);
            },
            [&](const tm::Ap& n) {
              app_head(n.fn, d, p);
              out += ' ';
              atom(n.arg, d, p);
            },
            [&](const tm::Pair& n) {
              out += '(';
              term(n.fst, d, p);
              out += ", ";
              term(n.snd, d, p);
              out += ')';
            },
            [&](const tm::Split& n) {
              out += "split ";
              term(n.scrut, d, p);
              out += " as (" + term_name(d) + ", " + term_name(d + 1) + ") in ";
              term(n.body, d + 2, p);
            },
            [&](const tm::Refl&) { out += "refl"; },
            [&](const tm::Seal& n) {
              out += "seal ";
              atom(n.arg, d, p);
            },
            [&](const tm::Star&) { out += '*'; },
            [&](const tm::UnsealInd& n) {
              out += "unseal ";
              term(n.scrut, d, p);
              out += " at " + term_name(d) + ". ";
              type(n.motive, d + 1, p);
              out += " { seal " + term_name(d) + " => ";
              term(n.eta_branch, d + 1, p);
              out += " | * " + phase_name(p) + " => ";
              term(n.star_branch, d, p + 1);
              out += " }";
            },
            [&](const tm::PLam& n) {
              out += "plam " + phase_name(p) + ". ";
              term(n.body, d, p + 1);
            },
            [&](const tm::PAp& n) {
              out += "papp ";
              atom(n.arg, d, p);
            },
            [&](const tm::Ind& n) {
              out += "ind ";
              term(n.scrut, d, p);
              out += " at " + term_name(d) + ". ";
              type(n.motive, d + 1, p);
              out += " { zero => ";
              term(n.zero_branch, d, p);
              out += " | suc " + term_name(d) + ", " + term_name(d + 1) + " => ";
              term(n.suc_branch, d + 2, p);
              out += " }";
            },
        },
        node_of(t));
  }

  void type(const Type& t, int d, int p) {
    std::visit(
        overloaded{
            [&](const ty::Nat&) { out += "nat"; },
            [&](const ty::U& n) {
              out += "U ";
              type(n.comp, d, p);
            },
            [&](const ty::Sig& n) {
              out += "Sig (" + term_name(d) + " : ";
              type(n.fst, d, p);
              out += ") ";
              type(n.snd, d + 1, p);
            },
            [&](const ty::Eq& n) {
              out += "eq (";
              type(n.type, d, p);
              out += ", ";
              term(n.lhs, d, p);
              out += ", ";
              term(n.rhs, d, p);
              out += ')';
            },
            [&](const ty::Op& n) {
              out += "Op ";
              type(n.arg, d, p);
            },
            [&](const ty::Cl& n) {
              out += "Cl ";
              type(n.arg, d, p);
            },
            [&](const ty::F& n) {
              out += "F ";
              type(n.arg, d, p);
            },
            [&](const ty::Pi& n) {
              out += "Pi (" + term_name(d) + " : ";
              type(n.dom, d, p);
              out += ") ";
              type(n.cod, d + 1, p);
            },
        },
        node_of(t));
  }

  void cost(const CostExpr& c) {
    if (c.is_zero()) {
      out += '0';
    } else if (c.is_lit()) {
      out += show_structural(c.lit_elem());
    } else {
      cost(c.add_lhs());
      out += '+';
      cost(c.add_rhs());
    }
  }
};

} // namespace

Term SourceFile::linked_main() const {
  std::vector<Term> linked;
  linked.reserve(decls.size());
  for (std::size_t k = 0; k < decls.size(); ++k) {
    Term t = decls[k].term;
    for (std::size_t j = k; j-- > 0;) t = subst(t, linked[j]);
    linked.push_back(std::move(t));
  }
  Term t = main;
  for (std::size_t j = decls.size(); j-- > 0;) t = subst(t, linked[j]);
  return t;
}

Type SourceFile::linked_main_type() const {
  std::vector<Term> linked;
  linked.reserve(decls.size());
  for (std::size_t k = 0; k < decls.size(); ++k) {
    Term t = decls[k].term;
    for (std::size_t j = k; j-- > 0;) t = subst(t, linked[j]);
    linked.push_back(std::move(t));
  }
  Type t = main_type;
  for (std::size_t j = decls.size(); j-- > 0;) t = subst(t, linked[j]);
  return t;
}

ParseResult parse(std::string_view source, const CostModel& model) {
  ParseResult r;
  try {
    Parser p(source, model);
    r.file = p.parse_file();
  } catch (const ParseFail& f) {
    r.diagnostics.push_back(f.d);
  }
  return r;
}

std::optional<Term> parse_term_text(std::string_view text, const CostModel& model,
                                    std::vector<Diagnostic>* diags) {
  try {
    Parser p(text, model);
    return p.parse_closed_term();
  } catch (const ParseFail& f) {
    if (diags) diags->push_back(f.d);
    return std::nullopt;
  }
}

std::optional<Type> parse_type_text(std::string_view text, const CostModel& model,
                                    std::vector<Diagnostic>* diags) {
  try {
    Parser p(text, model);
    return p.parse_closed_type();
  } catch (const ParseFail& f) {
    if (diags) diags->push_back(f.d);
    return std::nullopt;
  }
}

std::string pretty(const Term& t) {
  Printer pr;
  pr.term(t, 0, 0);
  return std::move(pr.out);
}

std::string pretty(const Type& t) {
  Printer pr;
  pr.type(t, 0, 0);
  return std::move(pr.out);
}

std::string pretty(const CostExpr& c) {
  Printer pr;
  pr.cost(c);
  return std::move(pr.out);
}

std::pair<int, int> line_col_at(std::string_view source, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string render_diagnostic(std::string_view source, const Diagnostic& d,
                              std::string_view path) {
  auto [line, col] = line_col_at(source, d.span.lo);
  std::string out = std::string(path) + ":" + std::to_string(line) + ":" +
                    std::to_string(col) + ": error: " + d.message + "\n";
  std::size_t lo = std::min<std::size_t>(d.span.lo, source.size());
  std::size_t ls = lo;
  while (ls > 0 && source[ls - 1] != '\n') --ls;
  std::size_t le = lo;
  while (le < source.size() && source[le] != '\n') ++le;
  out += "  | " + std::string(source.substr(ls, le - ls)) + "\n";
  std::size_t caret = lo - ls;
  std::size_t width = 1;
  if (d.span.hi > d.span.lo) {
    std::size_t hi = std::min<std::size_t>(d.span.hi, le);
    if (hi > lo) width = hi - lo;
  }
  out += "  | " + std::string(caret, ' ') + std::string(width, '^') + "\n";
  if (!d.hint.empty()) out += "  hint: " + d.hint + "\n";
  return out;
}

} // namespace calf
