#include "lexer.hpp"

#include <revs/frontend.hpp>

#include <algorithm>
#include <set>

namespace revs
{

using detail::Tok;
using detail::Token;

namespace
{

class Parser
{
public:
  explicit Parser( std::vector<Token> tokens ) : toks_( std::move( tokens ) ) {}

  SourceProgram program()
  {
    SourceProgram p;
    if ( peek().kind != Tok::eof )
      p.items = block( peek().col );
    if ( peek().kind != Tok::eof )
      fail( std::string( "unexpected " ) + detail::describe( peek().kind ) );
    if ( p.items.empty() )
      throw source_error( "no output expression" );
    auto const& last = p.items.back();
    if ( last.tag != StmtTag::expr && !last.is_function() )
      throw source_error( "no output expression", last.line, last.col );
    return p;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int limit_ = 0;
  std::size_t stmt_start_ = std::size_t( -1 );

  Token const& peek( std::size_t k = 0 ) const { return toks_[std::min( pos_ + k, toks_.size() - 1 )]; }
  bool offside() const
  {
    auto const& t = peek();
    if ( t.kind == Tok::eof )
      return true;
    return pos_ != stmt_start_ && t.first_on_line && t.col <= limit_;
  }
  bool at( Tok k ) const { return !offside() && peek().kind == k; }
  Token const& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail( std::string const& msg ) const
  {
    throw source_error( msg, peek().line, peek().col );
  }

  Token const& expect( Tok k )
  {
    if ( !at( k ) )
      fail( std::string( "expected " ) + detail::describe( k ) + ", found " + detail::describe( peek().kind ) );
    return next();
  }

  struct LimitGuard
  {
    Parser& p;
    int saved;
    LimitGuard( Parser& p, int l ) : p( p ), saved( p.limit_ ) { p.limit_ = l; }
    ~LimitGuard() { p.limit_ = saved; }
  };

  static bool closes_block( Tok k ) { return k == Tok::eof || k == Tok::kw_end || k == Tok::rparen; }

  /// Statements aligned at `column`.
  Block block( int column )
  {
    LimitGuard g( *this, column );
    Block b;
    while ( true )
    {
      while ( peek().kind == Tok::semicolon )
        next();
      auto const& t = peek();
      if ( closes_block( t.kind ) || ( t.first_on_line && t.col < column ) )
        break;
      if ( t.first_on_line && t.col > column )
        fail( "unexpected indentation" );
      stmt_start_ = pos_;
      b.push_back( statement() );
      auto const& n = peek();
      if ( !( n.kind == Tok::semicolon || closes_block( n.kind ) || ( n.first_on_line && n.col <= column ) ) )
        fail( std::string( "unexpected " ) + detail::describe( n.kind ) );
    }
    return b;
  }

  /// Body after `=` or `do`.
  Block body()
  {
    if ( peek().kind == Tok::kw_begin && !offside() )
    {
      next();
      Block b;
      if ( peek().kind != Tok::kw_end )
        b = block( peek().col );
      if ( peek().kind != Tok::kw_end )
        fail( "expected 'end'" );
      next();
      return b;
    }
    if ( offside() )
      fail( "missing body" );
    if ( peek().first_on_line )
      return block( peek().col );
    Block b;
    b.push_back( statement() );
    while ( at( Tok::semicolon ) )
    {
      next();
      if ( offside() || closes_block( peek().kind ) )
        break;
      b.push_back( statement() );
    }
    return b;
  }

  Stmt make( StmtTag tag, Token const& at_tok )
  {
    Stmt s;
    s.tag = tag;
    s.line = at_tok.line;
    s.col = at_tok.col;
    return s;
  }

  Stmt statement()
  {
    auto const& first = peek();
    switch ( first.kind )
    {
    case Tok::kw_let: return let_stmt();
    case Tok::kw_for:
    {
      auto s = make( StmtTag::for_, next() );
      s.name = expect( Tok::ident ).text;
      expect( Tok::kw_in );
      s.lo = expr();
      expect( Tok::dotdot );
      s.hi = expr();
      expect( Tok::kw_do );
      s.body = body();
      return s;
    }
    case Tok::kw_clean:
    {
      auto s = make( StmtTag::clean, next() );
      s.name = expect( Tok::ident ).text;
      if ( at( Tok::dot_index ) )
      {
        next();
        s.index = expr();
        expect( Tok::rbracket );
      }
      return s;
    }
    default: break;
    }
    Token const start = first;
    auto e = expr();
    if ( at( Tok::arrow ) )
    {
      next();
      Stmt s;
      if ( e->tag == ExprTag::ident )
        s = make( StmtTag::assign, start );
      else if ( e->tag == ExprTag::index && e->args[0]->tag == ExprTag::ident )
      {
        s = make( StmtTag::index_assign, start );
        s.index = e->args[1];
        e = e->args[0];
      }
      else
        throw source_error( "invalid assignment target", start.line, start.col );
      s.name = e->name;
      s.value = expr();
      return s;
    }
    auto s = make( StmtTag::expr, start );
    s.value = e;
    return s;
  }

  Stmt let_stmt()
  {
    auto s = make( StmtTag::let, next() );
    if ( at( Tok::kw_rec ) )
      fail( "recursion unsupported" );
    if ( at( Tok::kw_mutable ) )
    {
      next();
      s.is_mutable = true;
    }
    s.name = expect( Tok::ident ).text;
    while ( !offside() && peek().kind != Tok::equals && peek().kind != Tok::colon )
    {
      if ( at( Tok::ident ) )
        s.params.push_back( next().text );
      else if ( at( Tok::lparen ) )
      {
        next();
        if ( at( Tok::rparen ) )
          fail( "unit parameters are not supported" );
        s.params.push_back( expect( Tok::ident ).text );
        if ( at( Tok::colon ) )
          skip_type( Tok::rparen );
        expect( Tok::rparen );
      }
      else
        fail( "expected parameter" );
    }
    if ( s.is_mutable && !s.params.empty() )
      fail( "a function cannot be mutable" );
    if ( at( Tok::colon ) )
      skip_type( Tok::equals );
    expect( Tok::equals );
    s.body = body();
    if ( s.body.empty() || s.body.back().tag != StmtTag::expr )
      throw source_error( "binding '" + s.name + "' has no value expression", s.line, s.col );
    return s;
  }

  /// Type annotations are accepted and ignored.
  void skip_type( Tok stop )
  {
    next(); // ':'
    int depth = 0;
    while ( !offside() )
    {
      auto k = peek().kind;
      if ( depth == 0 && k == stop )
        return;
      if ( k == Tok::lparen || k == Tok::lbracket )
        ++depth;
      if ( k == Tok::rparen || k == Tok::rbracket )
        --depth;
      next();
    }
  }

  ExprPtr node( ExprTag tag, Token const& t, std::string name = {}, std::vector<ExprPtr> args = {} )
  {
    auto e = std::make_shared<Expr>();
    e->tag = tag;
    e->line = t.line;
    e->col = t.col;
    e->name = std::move( name );
    e->args = std::move( args );
    return e;
  }

  ExprPtr expr() { return binary_level( 0 ); }

  ExprPtr binary_level( int level )
  {
    static std::vector<std::vector<Tok>> const levels = {
        { Tok::or_or }, { Tok::and_and }, { Tok::neq }, { Tok::plus, Tok::minus }, { Tok::star, Tok::slash, Tok::percent } };
    if ( level == static_cast<int>( levels.size() ) )
      return unary();
    auto lhs = binary_level( level + 1 );
    while ( !offside() )
    {
      auto const& ops = levels[level];
      if ( std::find( ops.begin(), ops.end(), peek().kind ) == ops.end() )
        break;
      auto op = next();
      auto rhs = binary_level( level + 1 );
      lhs = node( ExprTag::binary, op, op.text, { lhs, rhs } );
    }
    return lhs;
  }

  ExprPtr unary()
  {
    if ( at( Tok::minus ) )
    {
      auto op = next();
      return node( ExprTag::negate, op, "-", { unary() } );
    }
    return application();
  }

  bool starts_atom() const
  {
    if ( offside() )
      return false;
    switch ( peek().kind )
    {
    case Tok::ident:
    case Tok::integer:
    case Tok::kw_true:
    case Tok::kw_false:
    case Tok::lparen:
    case Tok::lbracket:
    case Tok::lbar:
      return true;
    default:
      return false;
    }
  }

  ExprPtr application()
  {
    if ( at( Tok::ident ) && peek( 1 ).kind != Tok::dot_index )
    {
      auto head = next();
      std::vector<ExprPtr> args;
      while ( starts_atom() )
        args.push_back( postfix() );
      if ( args.empty() )
        return node( ExprTag::ident, head, head.text );
      return node( ExprTag::apply, head, head.text, std::move( args ) );
    }
    return postfix();
  }

  ExprPtr postfix()
  {
    auto e = atom();
    while ( at( Tok::dot_index ) )
    {
      auto t = next();
      LimitGuard g( *this, 0 );
      auto i = expr();
      if ( at( Tok::dotdot ) )
      {
        next();
        auto j = expr();
        e = node( ExprTag::slice, t, {}, { e, i, j } );
      }
      else
        e = node( ExprTag::index, t, {}, { e, i } );
      expect( Tok::rbracket );
    }
    return e;
  }

  ExprPtr atom()
  {
    auto const& t = peek();
    if ( offside() )
      fail( "expected an expression" );
    switch ( t.kind )
    {
    case Tok::integer:
    {
      auto e = node( ExprTag::int_lit, t );
      std::const_pointer_cast<Expr>( e )->value = t.value;
      next();
      return e;
    }
    case Tok::kw_true:
    case Tok::kw_false:
    {
      auto e = node( ExprTag::bool_lit, t );
      std::const_pointer_cast<Expr>( e )->value = t.kind == Tok::kw_true;
      next();
      return e;
    }
    case Tok::ident:
    {
      auto e = node( ExprTag::ident, t, t.text );
      next();
      return e;
    }
    case Tok::lparen:
    {
      next();
      LimitGuard g( *this, 0 );
      auto e = expr();
      expect( Tok::rparen );
      return e;
    }
    case Tok::lbracket:
    case Tok::lbar:
    {
      bool const ints = t.kind == Tok::lbar;
      auto open = next();
      LimitGuard g( *this, 0 );
      std::vector<ExprPtr> items;
      auto const close = ints ? Tok::rbar : Tok::rbracket;
      while ( !at( close ) )
      {
        items.push_back( expr() );
        if ( at( Tok::semicolon ) )
          next();
        else if ( !at( close ) )
          fail( std::string( "expected ';' or " ) + detail::describe( close ) );
      }
      next();
      return node( ints ? ExprTag::int_array : ExprTag::list, open, {}, std::move( items ) );
    }
    default:
      fail( std::string( "unexpected " ) + detail::describe( t.kind ) );
    }
  }
};

// Scope check: every identifier is bound before use and `x <- e` targets a
// mutable binding.
class Resolver
{
public:
  void program( Block const& items )
  {
    push();
    block( items );
    pop();
  }

private:
  struct Binding
  {
    bool is_mutable;
  };
  std::vector<std::map<std::string, Binding>> scopes_;

  static bool builtin( std::string const& n )
  {
    static std::set<std::string> const names = { "not", "rot", "isqrt", "Array.zeroCreate", "Array.append",
                                                  "Array.length", "Array.concat" };
    return names.contains( n );
  }

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }
  void bind( std::string const& n, bool m ) { scopes_.back()[n] = { m }; }

  Binding const* find( std::string const& n ) const
  {
    for ( auto it = scopes_.rbegin(); it != scopes_.rend(); ++it )
      if ( auto f = it->find( n ); f != it->end() )
        return &f->second;
    return nullptr;
  }

  void use( std::string const& n, int line, int col )
  {
    if ( !find( n ) && !builtin( n ) )
      throw source_error( "unknown identifier '" + n + "'", line, col );
  }

  void expr( Expr const& e )
  {
    if ( e.tag == ExprTag::ident || e.tag == ExprTag::apply )
      use( e.name, e.line, e.col );
    for ( auto const& a : e.args )
      expr( *a );
  }

  void block( Block const& b )
  {
    for ( auto const& s : b )
      stmt( s );
  }

  void stmt( Stmt const& s )
  {
    switch ( s.tag )
    {
    case StmtTag::let:
      push();
      for ( auto const& p : s.params )
        bind( p, false );
      block( s.body );
      pop();
      bind( s.name, s.is_mutable );
      break;
    case StmtTag::assign:
    {
      auto b = find( s.name );
      if ( !b )
        throw source_error( "unknown identifier '" + s.name + "'", s.line, s.col );
      if ( !b->is_mutable )
        throw source_error( "assignment to immutable binding '" + s.name + "'", s.line, s.col );
      expr( *s.value );
      break;
    }
    case StmtTag::index_assign:
      use( s.name, s.line, s.col );
      expr( *s.index );
      expr( *s.value );
      break;
    case StmtTag::for_:
      expr( *s.lo );
      expr( *s.hi );
      push();
      bind( s.name, false );
      block( s.body );
      pop();
      break;
    case StmtTag::clean:
      use( s.name, s.line, s.col );
      if ( s.index )
        expr( *s.index );
      break;
    case StmtTag::expr:
      expr( *s.value );
      break;
    }
  }
};

} // namespace

SourceProgram parse( std::string const& text )
{
  Parser p( detail::lex( text ) );
  auto prog = p.program();
  Resolver().program( prog.items );
  return prog;
}

} // namespace revs
