#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace regal {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

struct Token {
  enum class K { Ident, Int, Sym, Eof };
  K k = K::Eof;
  std::string text;
  long long num = 0;
  int line = 0, col = 0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto peek = [&](size_t off = 0) -> char {
    return i + off < src.size() ? src[i + off] : '\0';
  };
  auto advance = [&](size_t n = 1) {
    for (size_t k = 0; k < n && i < src.size(); k++, i++) {
      if (src[i] == '\n') { line++; col = 1; } else { col++; }
    }
  };
  while (i < src.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(); continue; }
    if (c == '/' && peek(1) == '/') {
      while (i < src.size() && peek() != '\n') advance();
      continue;
    }
    if (c == '/' && peek(1) == '*') {
      int l0 = line, c0 = col;
      advance(2);
      while (i < src.size() && !(peek() == '*' && peek(1) == '/')) advance();
      if (i >= src.size()) throw ParseError("unterminated comment", l0, c0);
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) j++;
      t.k = Token::K::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) j++;
      t.k = Token::K::Int;
      t.text = src.substr(i, j - i);
      t.num = std::stoll(t.text);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    // multi-character symbols, longest first
    static const char* syms3[] = {"=:="};
    static const char* syms2[] = {"|_", "_|", ":=", "**", "<=", ">=", "<>",
                                  "->", "/\\", "\\/", ".."};
    t.k = Token::K::Sym;
    bool matched = false;
    for (const char* s : syms3) {
      if (src.compare(i, 3, s) == 0) {
        t.text = s;
        advance(3);
        matched = true;
        break;
      }
    }
    if (!matched) {
      for (const char* s : syms2) {
        if (src.compare(i, 2, s) == 0) {
          t.text = s;
          advance(2);
          matched = true;
          break;
        }
      }
    }
    if (!matched) {
      static const std::string singles = "(){};:,.=<>+-*^\\/#|`_";
      if (singles.find(c) == std::string::npos)
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      t.text = std::string(1, c);
      advance();
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.k = Token::K::Eof;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

}  // namespace regal
