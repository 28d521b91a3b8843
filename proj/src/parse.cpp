// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "fftgen/formula.hpp"

namespace fftgen {

namespace {

enum class Tok { Integer, Word, Dot, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = src_[pos_];
    if (c == '.') {
      advance();
      t.kind = Tok::Dot;
      t.text = ".";
      return t;
    }
    if (c == '(') {
      advance();
      t.kind = Tok::LParen;
      t.text = "(";
      return t;
    }
    if (c == ')') {
      advance();
      t.kind = Tok::RParen;
      t.text = ")";
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Integer;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        t.text += src_[pos_];
        advance();
      }
      t.value = std::stoll(t.text);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Tok::Word;
      while (pos_ < src_.size() &&
             std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        t.text += src_[pos_];
        advance();
      }
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      advance();
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  FormulaPtr parse() {
    FormulaPtr e = expr();
    if (cur_.kind != Tok::End)
      throw ParseError("trailing input '" + describe(cur_) + "'", cur_.line,
                       cur_.col);
    return e;
  }

private:
  // expr := term ('.' term)*
  FormulaPtr expr() {
    std::vector<FormulaPtr> factors;
    factors.push_back(term());
    while (cur_.kind == Tok::Dot) {
      shift();
      factors.push_back(term());
    }
    return compose(std::move(factors));
  }

  // term := atom ('kron' atom)*, left-associative
  FormulaPtr term() {
    FormulaPtr t = atom();
    while (cur_.kind == Tok::Word && cur_.text == "kron") {
      shift();
      t = kronecker(std::move(t), atom());
    }
    return t;
  }

  // atom := 'DFT' INT | 'I' INT | 'Pi' INT INT | 'D' INT INT | '(' expr ')'
  FormulaPtr atom() {
    if (cur_.kind == Tok::LParen) {
      shift();
      FormulaPtr e = expr();
      expect(Tok::RParen, ")");
      return e;
    }
    if (cur_.kind != Tok::Word)
      throw ParseError("expected operator, got '" + describe(cur_) + "'",
                       cur_.line, cur_.col);
    const std::string op = cur_.text;
    const int line = cur_.line, col = cur_.col;
    shift();
    if (op == "DFT")
      return dft(integer("DFT"));
    if (op == "I")
      return identity(integer("I"));
    if (op == "Pi") {
      const int64_t total = integer("Pi");
      return stride_permute(total, integer("Pi"));
    }
    if (op == "D") {
      const int64_t total = integer("D");
      return twiddle_diag(total, integer("D"));
    }
    throw ParseError("unknown operator '" + op + "'", line, col);
  }

  int64_t integer(const std::string &op) {
    if (cur_.kind != Tok::Integer)
      throw ParseError("expected integer after '" + op + "', got '" +
                           describe(cur_) + "'",
                       cur_.line, cur_.col);
    const int64_t v = cur_.value;
    shift();
    return v;
  }

  void expect(Tok k, const std::string &what) {
    if (cur_.kind != k)
      throw ParseError("expected '" + what + "', got '" + describe(cur_) + "'",
                       cur_.line, cur_.col);
    shift();
  }

  static std::string describe(const Token &t) {
    return t.kind == Tok::End ? "end of input" : t.text;
  }

  void shift() { cur_ = lexer_.next(); }

  Lexer lexer_;
  Token cur_;
};

} // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

} // namespace fftgen
