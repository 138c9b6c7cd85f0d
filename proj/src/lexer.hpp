#pragma once

#include <string>
#include <vector>

namespace revs::detail
{

enum class Tok : unsigned char
{
  ident,
  integer,
  kw_let,
  kw_mutable,
  kw_rec,
  kw_for,
  kw_in,
  kw_do,
  kw_begin,
  kw_end,
  kw_clean,
  kw_true,
  kw_false,
  arrow,     // <-
  neq,       // <>
  and_and,   // &&
  or_or,     // ||
  plus,
  minus,
  star,
  slash,
  percent,
  lparen,
  rparen,
  lbracket,
  rbracket,
  lbar,      // [|
  rbar,      // |]
  dot_index, // .[
  dotdot,
  equals,
  colon,
  semicolon,
  comma,
  eof
};

struct Token
{
  Tok kind;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;
  bool first_on_line = false;
};

std::vector<Token> lex( std::string const& text );

char const* describe( Tok t );

} // namespace revs::detail
