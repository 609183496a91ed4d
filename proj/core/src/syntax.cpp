#include "asp/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_set>

namespace asp {

std::string Diagnostic::str() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

ParseError::ParseError(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}

namespace {

enum class Tok { Ident, Number, Stream, Tree, Tail, Mk, Left, Right, Eq, Colon, LParen, RParen, Comma, Plus, Slash, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  if (t.type == Tok::End) return "end of file";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  int end_line = 1, end_col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.text = std::string(src.substr(i, j - i));
      if (t.text == "stream") t.type = Tok::Stream;
      else if (t.text == "tree") t.type = Tok::Tree;
      else if (t.text == "tail") t.type = Tok::Tail;
      else if (t.text == "mk") t.type = Tok::Mk;
      else if (t.text == "left") t.type = Tok::Left;
      else if (t.text == "right") t.type = Tok::Right;
      else t.type = Tok::Ident;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      t.type = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      switch (c) {
        case '=': t.type = Tok::Eq; break;
        case ':': t.type = Tok::Colon; break;
        case '(': t.type = Tok::LParen; break;
        case ')': t.type = Tok::RParen; break;
        case ',': t.type = Tok::Comma; break;
        case '+': t.type = Tok::Plus; break;
        case '/': t.type = Tok::Slash; break;
        default:
          throw ParseError({line, col, std::string("syntax error: unexpected character '") + c + "'"});
      }
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(t));
    end_line = line;
    end_col = col;
  }
  // Reported right after the last token, so a truncated definition points
  // at its own line rather than at trailing blank lines.
  Token end;
  end.line = end_line;
  end.column = end_col;
  out.push_back(end);
  return out;
}

// Surface tree before endpoint normalization and validation.
struct Raw {
  Op op = Op::Rec;
  Rational prob;
  std::string ident;  // Rec: name used; Cons/Mk: label
  std::vector<Raw> kids;
  int line = 0;
  int column = 0;
};

struct RawDef {
  Kind kind = Kind::Stream;
  std::string name;
  int line = 0;
  int column = 0;
  Raw body;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  bool at_end() const { return peek().type == Tok::End; }

  RawDef definition() {
    const Token& kw = peek();
    if (kw.type != Tok::Stream && kw.type != Tok::Tree)
      fail(kw, "syntax error: expected 'stream' or 'tree', found " + describe(kw));
    next();
    RawDef def;
    def.kind = kw.type == Tok::Stream ? Kind::Stream : Kind::Tree;
    const Token& name = expect(Tok::Ident, "definition name");
    def.name = name.text;
    def.line = name.line;
    def.column = name.column;
    expect(Tok::Eq, "'='");
    def.body = expr();
    return def;
  }

  // Skips to the next definition keyword after an error.
  void recover() {
    if (!at_end()) next();
    while (!at_end() && peek().type != Tok::Stream && peek().type != Tok::Tree) next();
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] static void fail(const Token& at, std::string msg) {
    throw ParseError({at.line, at.column, std::move(msg)});
  }
  const Token& expect(Tok type, std::string_view what) {
    if (peek().type != type)
      fail(peek(), "syntax error: expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }

  Raw expr() {
    Raw lhs = atom();
    if (peek().type == Tok::LParen && peek(1).type == Tok::Plus) {
      const Token& open = next();
      next();
      Raw node;
      node.op = Op::Choice;
      node.line = open.line;
      node.column = open.column;
      node.prob = prob();
      expect(Tok::RParen, "')' after choice probability");
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(expr());
      return node;
    }
    return lhs;
  }

  Rational prob() {
    const Token& first = expect(Tok::Number, "probability");
    std::string text = first.text;
    if (peek().type == Tok::Slash) {
      next();
      const Token& den = expect(Tok::Number, "denominator");
      if (text.find('.') != std::string::npos || den.text.find('.') != std::string::npos)
        fail(first, "syntax error: fraction must use integers");
      text += "/" + den.text;
    }
    Rational p;
    try {
      p = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      fail(first, std::string("invalid probability: ") + e.what());
    }
    if (p < 0 || p > 1) fail(first, "probability out of range: " + text + " is not in [0,1]");
    return p;
  }

  Raw unary(Op op) {
    const Token& kw = next();
    expect(Tok::LParen, "'(' after '" + kw.text + "'");
    Raw node;
    node.op = op;
    node.line = kw.line;
    node.column = kw.column;
    node.kids.push_back(expr());
    expect(Tok::RParen, "')'");
    return node;
  }

  Raw atom() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Ident: {
        next();
        Raw node;
        node.ident = t.text;
        node.line = t.line;
        node.column = t.column;
        if (peek().type == Tok::Colon) {
          next();
          node.op = Op::Cons;
          node.kids.push_back(atom());
        }
        return node;
      }
      case Tok::Tail:
        return unary(Op::Tail);
      case Tok::Left:
        return unary(Op::Left);
      case Tok::Right:
        return unary(Op::Right);
      case Tok::Mk: {
        next();
        Raw node;
        node.op = Op::Mk;
        node.line = t.line;
        node.column = t.column;
        expect(Tok::LParen, "'(' after 'mk'");
        node.ident = expect(Tok::Ident, "label").text;
        expect(Tok::Comma, "','");
        node.kids.push_back(expr());
        expect(Tok::Comma, "','");
        node.kids.push_back(expr());
        expect(Tok::RParen, "')'");
        return node;
      }
      case Tok::LParen: {
        next();
        Raw inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t, "syntax error: expected a term, found " + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Raw normalize(Raw r) {
  if (r.op == Op::Choice) {
    if (r.prob == 1) return normalize(std::move(r.kids[0]));
    if (r.prob == 0) return normalize(std::move(r.kids[1]));
  }
  for (auto& k : r.kids) k = normalize(std::move(k));
  return r;
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Rec: return "variable";
    case Op::Choice: return "choice";
    case Op::Cons: return ":";
    case Op::Tail: return "tail";
    case Op::Mk: return "mk";
    case Op::Left: return "left";
    case Op::Right: return "right";
  }
  return "?";
}

Term validate(const Raw& r, const RawDef& def, const std::set<std::string>& all_names) {
  auto fail = [&](std::string msg) -> Term { throw ParseError({r.line, r.column, std::move(msg)}); };
  bool stream_op = r.op == Op::Cons || r.op == Op::Tail;
  bool tree_op = r.op == Op::Mk || r.op == Op::Left || r.op == Op::Right;
  if ((stream_op && def.kind != Kind::Stream) || (tree_op && def.kind != Kind::Tree))
    return fail("mixed-kind term: '" + std::string(op_name(r.op)) + "' in " +
                std::string(to_string(def.kind)) + " definition '" + def.name + "'");
  switch (r.op) {
    case Op::Rec:
      if (r.ident == def.name) return Term::rec();
      if (all_names.count(r.ident))
        return fail("reference to another definition's name (unsupported): '" + r.ident + "'");
      return fail("unbound identifier '" + r.ident + "' (expected '" + def.name + "')");
    case Op::Choice:
      return Term::choice(r.prob, validate(r.kids[0], def, all_names), validate(r.kids[1], def, all_names));
    case Op::Cons:
      return Term::cons(r.ident, validate(r.kids[0], def, all_names));
    case Op::Mk:
      return Term::mk(r.ident, validate(r.kids[0], def, all_names), validate(r.kids[1], def, all_names));
    case Op::Tail:
    case Op::Left:
    case Op::Right:
      return Term::destruct(r.op, validate(r.kids[0], def, all_names));
  }
  return Term::rec();
}

void print_atom(const Term& t, std::string_view rec, std::string& out);

void print_expr(const Term& t, std::string_view rec, std::string& out) {
  if (t.op() != Op::Choice) {
    print_atom(t, rec, out);
    return;
  }
  // Right-associative: only a choice on the left needs parentheses.
  print_atom(t.child(0), rec, out);
  out += " (+ ";
  out += to_string(t.prob());
  out += ") ";
  print_expr(t.child(1), rec, out);
}

void print_atom(const Term& t, std::string_view rec, std::string& out) {
  switch (t.op()) {
    case Op::Rec:
      out += rec;
      return;
    case Op::Choice:
      out += '(';
      print_expr(t, rec, out);
      out += ')';
      return;
    case Op::Cons:
      out += t.label();
      out += " : ";
      print_atom(t.child(0), rec, out);
      return;
    case Op::Mk:
      out += "mk(";
      out += t.label();
      out += ", ";
      print_expr(t.child(0), rec, out);
      out += ", ";
      print_expr(t.child(1), rec, out);
      out += ')';
      return;
    case Op::Tail:
    case Op::Left:
    case Op::Right:
      out += op_name(t.op());
      out += '(';
      print_expr(t.child(0), rec, out);
      out += ')';
      return;
  }
}

}  // namespace

ParseResult parse_file_lenient(std::string_view text) {
  ParseResult result;
  std::vector<Token> toks;
  try {
    toks = lex(text);
  } catch (const ParseError& e) {
    result.errors.push_back(e.diagnostic());
    return result;
  }

  Parser parser(std::move(toks));
  std::vector<RawDef> raw;
  while (!parser.at_end()) {
    try {
      raw.push_back(parser.definition());
    } catch (const ParseError& e) {
      result.errors.push_back(e.diagnostic());
      parser.recover();
    }
  }

  std::set<std::string> names;
  for (const auto& d : raw) names.insert(d.name);

  std::set<std::string> seen;
  for (auto& d : raw) {
    if (!seen.insert(d.name).second) {
      result.errors.push_back({d.line, d.column, "duplicate definition name '" + d.name + "'"});
      continue;
    }
    try {
      Raw body = normalize(std::move(d.body));
      result.definitions.push_back({d.name, d.kind, validate(body, d, names)});
    } catch (const ParseError& e) {
      result.errors.push_back(e.diagnostic());
    }
  }
  return result;
}

std::vector<Definition> parse_file(std::string_view text) {
  ParseResult r = parse_file_lenient(text);
  if (!r.errors.empty()) {
    auto first = std::min_element(r.errors.begin(), r.errors.end(), [](const auto& a, const auto& b) {
      return std::tie(a.line, a.column) < std::tie(b.line, b.column);
    });
    throw ParseError(*first);
  }
  return std::move(r.definitions);
}

std::string print_term(const Term& t, std::string_view rec_name) {
  std::string out;
  print_expr(t, rec_name, out);
  return out;
}

std::string pretty_print(const Definition& d) {
  return std::string(to_string(d.kind)) + " " + d.name + " = " + print_term(d.body, d.name);
}

std::vector<Term> subterms(const Definition& d) {
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  std::vector<Term> stack{d.body};
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    out.push_back(t);
    for (std::size_t i = t.arity(); i-- > 0;) stack.push_back(t.child(i));
  }
  return out;
}

}  // namespace asp
