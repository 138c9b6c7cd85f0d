#include "lexer.hpp"

#include <revs/frontend.hpp>

#include <cctype>
#include <unordered_map>

namespace revs::detail
{

char const* describe( Tok t )
{
  switch ( t )
  {
  case Tok::ident: return "identifier";
  case Tok::integer: return "integer";
  case Tok::kw_let: return "'let'";
  case Tok::kw_mutable: return "'mutable'";
  case Tok::kw_rec: return "'rec'";
  case Tok::kw_for: return "'for'";
  case Tok::kw_in: return "'in'";
  case Tok::kw_do: return "'do'";
  case Tok::kw_begin: return "'begin'";
  case Tok::kw_end: return "'end'";
  case Tok::kw_clean: return "'clean'";
  case Tok::kw_true: return "'true'";
  case Tok::kw_false: return "'false'";
  case Tok::arrow: return "'<-'";
  case Tok::neq: return "'<>'";
  case Tok::and_and: return "'&&'";
  case Tok::or_or: return "'||'";
  case Tok::plus: return "'+'";
  case Tok::minus: return "'-'";
  case Tok::star: return "'*'";
  case Tok::slash: return "'/'";
  case Tok::percent: return "'%'";
  case Tok::lparen: return "'('";
  case Tok::rparen: return "')'";
  case Tok::lbracket: return "'['";
  case Tok::rbracket: return "']'";
  case Tok::lbar: return "'[|'";
  case Tok::rbar: return "'|]'";
  case Tok::dot_index: return "'.['";
  case Tok::dotdot: return "'..'";
  case Tok::equals: return "'='";
  case Tok::colon: return "':'";
  case Tok::semicolon: return "';'";
  case Tok::comma: return "','";
  case Tok::eof: return "end of input";
  }
  return "?";
}

namespace
{

bool ident_start( char c ) { return std::isalpha( static_cast<unsigned char>( c ) ) || c == '_'; }
bool ident_char( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '\''; }

} // namespace

std::vector<Token> lex( std::string const& text )
{
  static std::unordered_map<std::string, Tok> const keywords = {
      { "let", Tok::kw_let }, { "mutable", Tok::kw_mutable }, { "rec", Tok::kw_rec },
      { "for", Tok::kw_for }, { "in", Tok::kw_in }, { "do", Tok::kw_do },
      { "begin", Tok::kw_begin }, { "end", Tok::kw_end }, { "clean", Tok::kw_clean },
      { "true", Tok::kw_true }, { "false", Tok::kw_false } };
  static std::pair<char const*, Tok> const symbols[] = {
      { "<-", Tok::arrow }, { "<>", Tok::neq }, { "&&", Tok::and_and }, { "||", Tok::or_or },
      { "[|", Tok::lbar }, { "|]", Tok::rbar }, { ".[", Tok::dot_index }, { "..", Tok::dotdot },
      { "+", Tok::plus }, { "-", Tok::minus }, { "*", Tok::star }, { "/", Tok::slash },
      { "%", Tok::percent }, { "(", Tok::lparen }, { ")", Tok::rparen }, { "[", Tok::lbracket },
      { "]", Tok::rbracket }, { "=", Tok::equals }, { ":", Tok::colon }, { ";", Tok::semicolon },
      { ",", Tok::comma } };

  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  bool line_start = true;

  auto advance = [&]( std::size_t n ) {
    for ( ; n > 0 && i < text.size(); --n, ++i )
    {
      if ( text[i] == '\n' )
      {
        ++line;
        col = 1;
        line_start = true;
      }
      else
        col += text[i] == '\t' ? 4 : 1;
    }
  };

  while ( i < text.size() )
  {
    char c = text[i];
    if ( c == ' ' || c == '\t' || c == '\r' || c == '\n' )
    {
      advance( 1 );
      continue;
    }
    if ( text.compare( i, 2, "//" ) == 0 )
    {
      while ( i < text.size() && text[i] != '\n' )
        advance( 1 );
      continue;
    }
    if ( text.compare( i, 2, "(*" ) == 0 && text.compare( i, 3, "(*)" ) != 0 )
    {
      int const l = line, k = col;
      int depth = 0;
      do
      {
        if ( i + 1 >= text.size() )
          throw source_error( "unterminated comment", l, k );
        if ( text.compare( i, 2, "(*" ) == 0 )
        {
          ++depth;
          advance( 2 );
        }
        else if ( text.compare( i, 2, "*)" ) == 0 )
        {
          --depth;
          advance( 2 );
        }
        else
          advance( 1 );
      } while ( depth > 0 );
      continue;
    }

    Token t;
    t.line = line;
    t.col = col;
    t.first_on_line = line_start;
    line_start = false;

    if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      std::size_t j = i;
      while ( j < text.size() && std::isdigit( static_cast<unsigned char>( text[j] ) ) )
        ++j;
      t.kind = Tok::integer;
      t.text = text.substr( i, j - i );
      try
      {
        t.value = std::stoll( t.text );
      }
      catch ( std::out_of_range const& )
      {
        throw source_error( "integer literal out of range", t.line, t.col );
      }
      advance( j - i );
    }
    else if ( ident_start( c ) )
    {
      std::size_t j = i;
      while ( j < text.size() && ident_char( text[j] ) )
        ++j;
      // Qualified names such as Array.zeroCreate.
      while ( j + 1 < text.size() && text[j] == '.' && ident_start( text[j + 1] ) )
      {
        ++j;
        while ( j < text.size() && ident_char( text[j] ) )
          ++j;
      }
      t.text = text.substr( i, j - i );
      auto kw = keywords.find( t.text );
      t.kind = kw == keywords.end() ? Tok::ident : kw->second;
      advance( j - i );
    }
    else
    {
      bool found = false;
      for ( auto const& [sym, kind] : symbols )
      {
        std::string_view s( sym );
        if ( text.compare( i, s.size(), s ) == 0 )
        {
          t.kind = kind;
          t.text = s;
          advance( s.size() );
          found = true;
          break;
        }
      }
      if ( !found )
        throw source_error( std::string( "unexpected character '" ) + c + "'", line, col );
    }
    out.push_back( std::move( t ) );
  }
  Token eof;
  eof.kind = Tok::eof;
  eof.line = line;
  eof.col = 0;
  eof.first_on_line = true;
  out.push_back( eof );
  return out;
}

} // namespace revs::detail
