#include <cctype>

#include "genpatch/common.hpp"
#include "genpatch/lang.hpp"

namespace genpatch {

namespace {

constexpr std::string_view kKeywords[] = {
    "auto",   "break",    "case",     "char",   "const",    "continue", "default",
    "do",     "double",   "else",     "enum",   "extern",   "float",    "for",
    "goto",   "if",       "inline",   "int",    "long",     "register", "return",
    "short",  "signed",   "sizeof",   "static", "struct",   "switch",   "typedef",
    "union",  "unsigned", "void",     "volatile", "while",  "_Bool",    "bool",
    "restrict", "__inline", "__restrict", "__const"};

// Longest first so a linear scan implements maximal munch.
constexpr std::string_view kOperators[] = {
    "...", "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##", "+",
    "-",   "*",   "/",   "%",  "<",  ">",  "=",  "!",  "~",  "&",  "|",  "^",
    "?",   ":",   ".",   "@"};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& path) : src_(src) { ts_.path = path; }

  TokenStream run() {
    std::string trivia;
    while (true) {
      std::size_t triv_start = i_;
      skip_trivia();
      trivia.assign(src_.substr(triv_start, i_ - triv_start));
      if (i_ >= src_.size()) break;
      Token t;
      t.trivia = std::move(trivia);
      t.pos = {line_, col_};
      t.offset = i_;
      std::size_t start = i_;
      t.kind = scan();
      t.lexeme.assign(src_.substr(start, i_ - start));
      ts_.tokens.push_back(std::move(t));
      trivia.clear();
    }
    ts_.trailing = trivia;
    return std::move(ts_);
  }

 private:
  char peek(std::size_t k = 0) const {
    return i_ + k < src_.size() ? src_[i_ + k] : '\0';
  }
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  [[noreturn]] void fail(const std::string& what, Position at) const {
    throw Error("lexical", ts_.path + ":" + std::to_string(at.line) + ":" +
                               std::to_string(at.column) + ": " + what);
  }

  void skip_trivia() {
    while (i_ < src_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (i_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        Position at{line_, col_};
        advance();
        advance();
        while (true) {
          if (i_ >= src_.size()) fail("unterminated comment", at);
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        break;
      }
    }
  }

  TokenKind scan() {
    char c = peek();
    if (is_ident_start(c)) {
      std::size_t s = i_;
      while (i_ < src_.size() && is_ident_char(peek())) advance();
      auto word = src_.substr(s, i_ - s);
      for (auto k : kKeywords)
        if (k == word) return TokenKind::Keyword;
      return TokenKind::Identifier;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      while (i_ < src_.size()) {
        char d = peek();
        if ((d == '+' || d == '-') && i_ > 0 &&
            (src_[i_ - 1] == 'e' || src_[i_ - 1] == 'E' || src_[i_ - 1] == 'p' ||
             src_[i_ - 1] == 'P')) {
          advance();
        } else if (is_ident_char(d) || d == '.') {
          advance();
        } else {
          break;
        }
      }
      return TokenKind::Number;
    }
    if (c == '"' || c == '\'') {
      Position at{line_, col_};
      char quote = c;
      advance();
      while (true) {
        if (i_ >= src_.size() || peek() == '\n')
          fail(quote == '"' ? "unterminated string literal"
                            : "unterminated character literal",
               at);
        if (peek() == '\\') {
          advance();
          if (i_ < src_.size()) advance();
          continue;
        }
        if (peek() == quote) {
          advance();
          break;
        }
        advance();
      }
      return quote == '"' ? TokenKind::String : TokenKind::Char;
    }
    switch (c) {
      case '(': case ')': case '{': case '}': case '[': case ']':
      case ';': case ',': case '#':
        advance();
        return TokenKind::Punct;
      default:
        break;
    }
    for (auto op : kOperators) {
      if (src_.substr(i_, op.size()) == op) {
        for (std::size_t k = 0; k < op.size(); ++k) advance();
        return TokenKind::Operator;
      }
    }
    // Anything else (stray bytes, UTF-8 sequences) becomes a one-character
    // punctuation token so the parser can fold it into an opaque region.
    unsigned char u = static_cast<unsigned char>(c);
    std::size_t len = u < 0x80 ? 1 : (u >> 5) == 0x6 ? 2 : (u >> 4) == 0xE ? 3 : (u >> 3) == 0x1E ? 4 : 1;
    for (std::size_t k = 0; k < len && i_ < src_.size(); ++k) advance();
    return TokenKind::Punct;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  TokenStream ts_;
};

}  // namespace

TokenStream tokenize(std::string_view source, const std::string& path) {
  return Lexer(source, path).run();
}

std::string print_tokens(const TokenStream& ts) {
  std::string out;
  for (const auto& t : ts.tokens) {
    out += t.trivia;
    out += t.lexeme;
  }
  out += ts.trailing;
  return out;
}

bool is_type_keyword(std::string_view w) {
  static constexpr std::string_view kTypeWords[] = {
      "int",    "char",   "void",     "short",    "long",   "float",
      "double", "unsigned", "signed", "struct",   "union",  "enum",
      "const",  "static", "extern",   "volatile", "register", "inline",
      "_Bool",  "bool",   "restrict", "__inline", "__restrict", "__const"};
  for (auto k : kTypeWords)
    if (k == w) return true;
  return false;
}

}  // namespace genpatch
