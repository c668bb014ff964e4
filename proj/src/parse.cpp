#include "evlam/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace evlam {

namespace {

struct Token {
  enum class Kind {
    Ident, Nat, Lambda, Caret, Dot, LParen, RParen, Colon, Comma,
    Amp, Arrow, Turnstile, Less, Greater, End,
  };
  Kind kind;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  struct Snapshot {
    std::size_t pos;
    int line;
    int col;
    Token tok;
  };

  Snapshot snapshot() const { return {pos_, line_, col_, tok_}; }

  void restore(const Snapshot& s) {
    pos_ = s.pos;
    line_ = s.line;
    col_ = s.col;
    tok_ = s.tok;
  }

  [[noreturn]] void error(const std::string& msg) const {
    throw SyntaxError(tok_.line, tok_.col, msg);
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      bump();
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (c == '\\') { single(Token::Kind::Lambda); return; }
    if (c == '^') { single(Token::Kind::Caret); return; }
    if (c == '.') { single(Token::Kind::Dot); return; }
    if (c == '(') { single(Token::Kind::LParen); return; }
    if (c == ')') { single(Token::Kind::RParen); return; }
    if (c == ':') { single(Token::Kind::Colon); return; }
    if (c == ',') { single(Token::Kind::Comma); return; }
    if (c == '&') { single(Token::Kind::Amp); return; }
    if (c == '>') { single(Token::Kind::Greater); return; }
    if (c == '<') { single(Token::Kind::Less); return; }
    if (c == '-') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        tok_.kind = Token::Kind::Arrow;
        tok_.text = "->";
        bump();
        bump();
        return;
      }
      throw SyntaxError(line_, col_, "stray '-'");
    }
    if (c == '|') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        tok_.kind = Token::Kind::Turnstile;
        tok_.text = "|-";
        bump();
        bump();
        return;
      }
      throw SyntaxError(line_, col_, "stray '|'");
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok_.kind = Token::Kind::Nat;
      tok_.text.clear();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        tok_.text += text_[pos_];
        bump();
      }
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok_.kind = Token::Kind::Ident;
      tok_.text.clear();
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        tok_.text += text_[pos_];
        bump();
      }
      return;
    }
    throw SyntaxError(line_, col_, std::string("unexpected character '") + c +
                                       "'");
  }

  void single(Token::Kind kind) {
    tok_.kind = kind;
    tok_.text = text_[pos_];
    bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

bool is_evar_spelling(const std::string& s) {
  if (s.empty() || s[0] != 'e') return false;
  if (s.size() == 1) return true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

bool is_atom_spelling(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) {
    return false;
  }
  if (is_evar_spelling(s)) return false;
  for (char c : s) {
    if (c == '_') return false;
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Term term() {
    Term t = parse_term_inner();
    expect_end();
    return t;
  }

  RawType raw_type() {
    RawType t = parse_type_inner();
    expect_end();
    return t;
  }

  TypeEnv env() {
    TypeEnv e = parse_env_inner(Token::Kind::End);
    expect_end();
    return e;
  }

  Typing typing() {
    bool bracketed = false;
    if (lex_.peek().kind == Token::Kind::Less) {
      lex_.take();
      bracketed = true;
    }
    TypeEnv e = parse_env_inner(Token::Kind::Turnstile);
    expect(Token::Kind::Turnstile, "expected '|-'");
    CanonicalType t = canonicalize(parse_type_inner());
    if (bracketed) expect(Token::Kind::Greater, "expected '>'");
    expect_end();
    return Typing{e, t};
  }

 private:
  void expect(Token::Kind kind, const std::string& msg) {
    if (lex_.peek().kind != kind) lex_.error(msg);
    lex_.take();
  }

  void expect_end() {
    if (lex_.peek().kind != Token::Kind::End) {
      lex_.error("trailing input");
    }
  }

  IndexedVar indexed_var() {
    if (lex_.peek().kind != Token::Kind::Ident) {
      lex_.error("expected a variable name");
    }
    Token name = lex_.take();
    expect(Token::Kind::Caret, "expected '^' and a degree");
    if (lex_.peek().kind != Token::Kind::Nat) {
      lex_.error("expected a degree");
    }
    Token deg = lex_.take();
    return IndexedVar{VarName::of(name.text),
                      static_cast<unsigned>(std::stoul(deg.text))};
  }

  Term parse_term_inner() {
    if (lex_.peek().kind == Token::Kind::Lambda) {
      lex_.take();
      IndexedVar binder = indexed_var();
      expect(Token::Kind::Dot, "expected '.' after the binder");
      Term body = parse_term_inner();
      return Term::lam(binder, body);
    }
    return parse_app();
  }

  Term parse_app() {
    std::optional<Term> acc;
    while (true) {
      std::optional<Term> next = try_parse_atom_term();
      if (!next) break;
      acc = acc ? Term::app(*acc, *next) : *next;
    }
    if (!acc) lex_.error("expected a term");
    return *acc;
  }

  std::optional<Term> try_parse_atom_term() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident) {
      return Term::var(indexed_var());
    }
    if (t.kind == Token::Kind::LParen) {
      lex_.take();
      Term inner = parse_term_inner();
      expect(Token::Kind::RParen, "expected ')'");
      return inner;
    }
    if (t.kind == Token::Kind::Lambda) {
      // Unparenthesized abstraction extends to the right; it cannot start
      // an application operand.
      lex_.error("an abstraction in application position needs parentheses");
    }
    return std::nullopt;
  }

  RawType parse_type_inner() {
    RawType lhs = parse_inter();
    if (lex_.peek().kind == Token::Kind::Arrow) {
      lex_.take();
      RawType rhs = parse_type_inner();
      return RawType::mk_arrow(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  RawType parse_inter() {
    std::vector<RawType> parts;
    parts.push_back(parse_prim());
    while (lex_.peek().kind == Token::Kind::Amp) {
      lex_.take();
      parts.push_back(parse_prim());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return RawType::mk_inter(std::move(parts));
  }

  RawType parse_prim() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::LParen) {
      lex_.take();
      RawType inner = parse_type_inner();
      expect(Token::Kind::RParen, "expected ')'");
      return inner;
    }
    if (t.kind != Token::Kind::Ident) {
      lex_.error("expected a type");
    }
    Token name = lex_.take();
    if (is_evar_spelling(name.text)) {
      EVarName e = EVarName::make(name.text);
      RawType body = parse_prim();
      return RawType::mk_exp(std::move(e), std::move(body));
    }
    if (!is_atom_spelling(name.text)) {
      throw SyntaxError(name.line, name.col,
                        "'" + name.text + "' is not a valid atom name");
    }
    return RawType::mk_atom(name.text);
  }

  TypeEnv parse_env_inner(Token::Kind terminator) {
    TypeEnv env;
    if (lex_.peek().kind == terminator) return env;
    if (lex_.peek().kind == Token::Kind::LParen) {
      // allow '()' for the empty environment
      auto saved = lex_.snapshot();
      lex_.take();
      if (lex_.peek().kind == Token::Kind::RParen) {
        lex_.take();
        return env;
      }
      lex_.restore(saved);
    }
    while (true) {
      IndexedVar v = indexed_var();
      expect(Token::Kind::Colon, "expected ':' in a binding");
      CanonicalType t = canonicalize(parse_binding_type());
      env = env.with(v, t);
      if (lex_.peek().kind != Token::Kind::Comma) break;
      lex_.take();
    }
    return env;
  }

  // A binding type inside an environment: same grammar as a type, but the
  // comma and turnstile terminate it.
  RawType parse_binding_type() { return parse_type_inner(); }

  Lexer lex_;
};

}  // namespace

Term parse_term(const std::string& text) { return Parser(text).term(); }

RawType parse_raw_type(const std::string& text) {
  return Parser(text).raw_type();
}

CanonicalType parse_type(const std::string& text) {
  return canonicalize(parse_raw_type(text));
}

TypeEnv parse_env(const std::string& text) { return Parser(text).env(); }

Typing parse_typing(const std::string& text) { return Parser(text).typing(); }

std::string to_string(const Typing& typing) {
  std::string env = to_string(typing.env);
  if (env.empty()) env = "()";
  return "<" + env + " |- " + to_string(typing.type) + ">";
}

}  // namespace evlam
