// Concrete evaluator that walks the AST directly.  It shares nothing with
// flatten() beyond the parser, so agreement between the two is meaningful.

#include <revs/frontend.hpp>

#include <cmath>
#include <optional>
#include <set>
#include <variant>

namespace revs
{

namespace
{

using Bits = std::shared_ptr<std::vector<char>>;

struct Ref
{
  Bits store;
  std::size_t i;
  char& get() const { return ( *store )[i]; }
};

struct Scope;
struct Fn
{
  Stmt const* def;
  std::shared_ptr<Scope> scope;
};

using Val = std::variant<long long, std::vector<long long>, bool, Ref, std::vector<Ref>, Fn>;

struct Var
{
  Val v;
  bool scalar_cell; ///< mutable bool: `v` holds a Ref to its own cell
};

struct Scope
{
  std::shared_ptr<Scope> up;
  std::map<std::string, Var> vars;
  Var* lookup( std::string const& n )
  {
    for ( auto* s = this; s; s = s->up.get() )
      if ( auto it = s->vars.find( n ); it != s->vars.end() )
        return &it->second;
    return nullptr;
  }
};

using ScopePtr = std::shared_ptr<Scope>;

ScopePtr child( ScopePtr const& up )
{
  auto s = std::make_shared<Scope>();
  s->up = up;
  return s;
}

class Evaluator
{
public:
  Evaluator( BitVector const& in, ParamMap const& params ) : in_( in ), params_( params ) {}

  BitVector run( SourceProgram const& p )
  {
    auto global = std::make_shared<Scope>();
    auto const& items = p.items;
    for ( std::size_t i = 0; i + 1 < items.size(); ++i )
      stmt( items[i], global, true );
    auto const& last = items.back();
    Val result;
    if ( last.tag == StmtTag::expr )
      result = value( *last.value, global );
    else
    {
      std::vector<Val> args;
      for ( std::size_t i = 0; i < last.params.size(); ++i )
        args.emplace_back( next_bit() );
      result = invoke( Fn{ &last, global }, args );
    }
    if ( pos_ != in_.size() )
      throw source_error( "program consumed " + std::to_string( pos_ ) + " of " + std::to_string( in_.size() ) + " input bits" );
    std::vector<bool> bits;
    if ( auto const* b = std::get_if<bool>( &result ) )
      bits.push_back( *b );
    else if ( auto const* a = std::get_if<std::vector<Ref>>( &result ) )
      for ( auto const& r : *a )
        bits.push_back( r.get() );
    else
      throw source_error( "result is not boolean" );
    BitVector out( bits.size() );
    for ( std::size_t i = 0; i < bits.size(); ++i )
      out.set( i, bits[i] );
    return out;
  }

private:
  BitVector const& in_;
  ParamMap const& params_;
  std::size_t pos_ = 0;

  bool next_bit()
  {
    if ( pos_ >= in_.size() )
      throw source_error( "not enough input bits" );
    return in_.get( pos_++ );
  }

  static long long as_int( Val const& v )
  {
    if ( auto const* i = std::get_if<long long>( &v ) )
      return *i;
    throw source_error( "integer expected" );
  }
  static bool as_bool( Val const& v )
  {
    if ( auto const* b = std::get_if<bool>( &v ) )
      return *b;
    throw source_error( "boolean expected" );
  }
  static std::vector<Ref> const& as_array( Val const& v )
  {
    if ( auto const* a = std::get_if<std::vector<Ref>>( &v ) )
      return *a;
    throw source_error( "array expected" );
  }

  static std::vector<Ref> zeros( std::size_t n )
  {
    auto store = std::make_shared<std::vector<char>>( n, 0 );
    std::vector<Ref> r;
    for ( std::size_t i = 0; i < n; ++i )
      r.push_back( { store, i } );
    return r;
  }

  Ref& element( std::vector<Ref> const& a, long long i )
  {
    if ( i < 0 || i >= static_cast<long long>( a.size() ) )
      throw source_error( "index out of range" );
    return const_cast<Ref&>( a[i] );
  }

  Val value( Expr const& e, ScopePtr const& s )
  {
    switch ( e.tag )
    {
    case ExprTag::bool_lit: return e.value != 0;
    case ExprTag::int_lit: return e.value;
    case ExprTag::ident:
    {
      auto* v = s->lookup( e.name );
      if ( !v )
        throw source_error( "unknown identifier " + e.name, e.line, e.col );
      if ( v->scalar_cell )
        return static_cast<bool>( std::get<Ref>( v->v ).get() );
      return v->v;
    }
    case ExprTag::index:
    {
      auto base = value( *e.args[0], s );
      auto i = as_int( value( *e.args[1], s ) );
      if ( auto const* ints = std::get_if<std::vector<long long>>( &base ) )
      {
        if ( i < 0 || i >= static_cast<long long>( ints->size() ) )
          throw source_error( "index out of range" );
        return ( *ints )[i];
      }
      return static_cast<bool>( element( as_array( base ), i ).get() );
    }
    case ExprTag::slice:
    {
      auto const a = as_array( value( *e.args[0], s ) );
      auto lo = as_int( value( *e.args[1], s ) );
      auto hi = as_int( value( *e.args[2], s ) );
      std::vector<Ref> r;
      for ( auto i = lo; i <= hi; ++i )
        r.push_back( element( a, i ) );
      return r;
    }
    case ExprTag::binary:
    {
      auto x = value( *e.args[0], s );
      auto y = value( *e.args[1], s );
      if ( e.name == "&&" )
        return as_bool( x ) && as_bool( y );
      if ( e.name == "||" )
        return as_bool( x ) || as_bool( y );
      if ( e.name == "<>" )
        return as_bool( x ) != as_bool( y );
      auto a = as_int( x ), b = as_int( y );
      switch ( e.name[0] )
      {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return a % b;
      }
    }
    case ExprTag::negate: return -as_int( value( *e.args[0], s ) );
    case ExprTag::int_array:
    {
      std::vector<long long> r;
      for ( auto const& a : e.args )
        r.push_back( as_int( value( *a, s ) ) );
      return r;
    }
    case ExprTag::list:
    {
      std::vector<Ref> r;
      for ( auto const& item : e.args )
      {
        if ( auto ref = cell_of( *item, s ) )
        {
          r.push_back( *ref );
          continue;
        }
        auto v = value( *item, s );
        if ( auto const* a = std::get_if<std::vector<Ref>>( &v ) )
          r.insert( r.end(), a->begin(), a->end() );
        else
        {
          auto z = zeros( 1 );
          z[0].get() = as_bool( v );
          r.push_back( z[0] );
        }
      }
      return r;
    }
    case ExprTag::apply: return apply( e, s );
    }
    throw source_error( "bad expression" );
  }

  std::optional<Ref> cell_of( Expr const& e, ScopePtr const& s )
  {
    if ( e.tag == ExprTag::ident )
      if ( auto* v = s->lookup( e.name ); v && v->scalar_cell )
        return std::get<Ref>( v->v );
    if ( e.tag == ExprTag::index )
    {
      auto base = value( *e.args[0], s );
      if ( auto const* a = std::get_if<std::vector<Ref>>( &base ) )
        return element( *a, as_int( value( *e.args[1], s ) ) );
    }
    return std::nullopt;
  }

  Val apply( Expr const& e, ScopePtr const& s )
  {
    auto const& n = e.name;
    if ( auto* f = s->lookup( n ) )
    {
      std::vector<Val> args;
      for ( auto const& a : e.args )
        args.push_back( value( *a, s ) );
      return invoke( std::get<Fn>( f->v ), args );
    }
    auto arg = [&]( std::size_t i ) { return value( *e.args.at( i ), s ); };
    if ( n == "not" )
      return !as_bool( arg( 0 ) );
    if ( n == "rot" )
    {
      auto k = as_int( arg( 0 ) );
      auto const a = as_array( arg( 1 ) );
      auto const len = static_cast<long long>( a.size() );
      std::vector<Ref> r;
      if ( len == 0 )
        return r;
      for ( long long i = 0; i < len; ++i )
        r.push_back( a[static_cast<std::size_t>( ( ( i + k ) % len + len ) % len )] );
      return r;
    }
    if ( n == "Array.zeroCreate" )
      return zeros( as_int( arg( 0 ) ) );
    if ( n == "Array.append" )
    {
      auto r = as_array( arg( 0 ) );
      auto const b = as_array( arg( 1 ) );
      r.insert( r.end(), b.begin(), b.end() );
      return r;
    }
    if ( n == "Array.concat" )
    {
      std::vector<Ref> r;
      for ( auto const& item : e.args.at( 0 )->args )
      {
        auto const a = as_array( value( *item, s ) );
        r.insert( r.end(), a.begin(), a.end() );
      }
      return r;
    }
    if ( n == "Array.length" )
    {
      auto v = arg( 0 );
      if ( auto const* ints = std::get_if<std::vector<long long>>( &v ) )
        return static_cast<long long>( ints->size() );
      return static_cast<long long>( as_array( v ).size() );
    }
    if ( n == "isqrt" )
    {
      auto k = as_int( arg( 0 ) );
      long long r = 0;
      while ( ( r + 1 ) * ( r + 1 ) <= k )
        ++r;
      return r;
    }
    throw source_error( "unknown function " + n, e.line, e.col );
  }

  Val invoke( Fn const& f, std::vector<Val> const& args )
  {
    auto s = child( f.scope );
    for ( std::size_t i = 0; i < args.size(); ++i )
      s->vars[f.def->params.at( i )] = { args[i], false };
    return *block( f.def->body, s );
  }

  std::optional<Val> block( Block const& b, ScopePtr const& s )
  {
    for ( std::size_t i = 0; i < b.size(); ++i )
    {
      if ( i + 1 == b.size() && b[i].tag == StmtTag::expr )
        return value( *b[i].value, s );
      stmt( b[i], s, false );
    }
    return std::nullopt;
  }

  Ref target( Stmt const& st, ScopePtr const& s )
  {
    auto* v = s->lookup( st.name );
    if ( !v )
      throw source_error( "unknown identifier " + st.name );
    if ( st.index )
      return element( as_array( v->v ), as_int( value( *st.index, s ) ) );
    return std::get<Ref>( v->v );
  }

  void stmt( Stmt const& st, ScopePtr const& s, bool top )
  {
    switch ( st.tag )
    {
    case StmtTag::let:
    {
      if ( st.is_function() )
      {
        s->vars[st.name] = { Fn{ &st, s }, false };
        return;
      }
      Expr const* only = st.body.size() == 1 ? st.body[0].value.get() : nullptr;
      if ( top && only && only->tag == ExprTag::apply && only->name == "Array.zeroCreate" && !s->lookup( only->name ) )
      {
        auto a = zeros( as_int( value( *only->args.at( 0 ), s ) ) );
        for ( auto& r : a )
          r.get() = next_bit();
        s->vars[st.name] = { a, false };
        return;
      }
      if ( top && only && only->tag == ExprTag::bool_lit && only->value == 0 )
      {
        auto cell = zeros( 1 )[0];
        cell.get() = next_bit();
        s->vars[st.name] = st.is_mutable ? Var{ cell, true } : Var{ static_cast<bool>( cell.get() ), false };
        return;
      }
      if ( top && only )
        if ( auto p = params_.find( st.name ); p != params_.end() )
        {
          s->vars[st.name] = { p->second, false };
          return;
        }
      auto v = *block( st.body, child( s ) );
      if ( st.is_mutable && std::holds_alternative<bool>( v ) )
      {
        auto cell = zeros( 1 )[0];
        cell.get() = std::get<bool>( v );
        s->vars[st.name] = { cell, true };
      }
      else
        s->vars[st.name] = { v, false };
      return;
    }
    case StmtTag::assign:
    {
      auto* v = s->lookup( st.name );
      if ( v->scalar_cell )
      {
        auto r = std::get<Ref>( v->v );
        r.get() = as_bool( value( *st.value, s ) );
      }
      else
        v->v = value( *st.value, s );
      return;
    }
    case StmtTag::index_assign:
    {
      auto b = as_bool( value( *st.value, s ) );
      target( st, s ).get() = b;
      return;
    }
    case StmtTag::for_:
    {
      auto lo = as_int( value( *st.lo, s ) );
      auto hi = as_int( value( *st.hi, s ) );
      for ( auto i = lo; i <= hi; ++i )
      {
        auto inner = child( s );
        inner->vars[st.name] = { i, false };
        block( st.body, inner );
      }
      return;
    }
    case StmtTag::clean:
    {
      auto* v = s->lookup( st.name );
      auto check = []( bool b ) {
        if ( b )
          throw source_error( "clean of a nonzero bit" );
      };
      if ( st.index || v->scalar_cell )
        check( target( st, s ).get() );
      else if ( auto const* a = std::get_if<std::vector<Ref>>( &v->v ) )
        for ( auto const& r : *a )
          check( r.get() );
      else
        check( as_bool( v->v ) );
      return;
    }
    case StmtTag::expr:
      value( *st.value, s );
      return;
    }
  }
};

} // namespace

BitVector evaluate_source( SourceProgram const& program, BitVector const& inputs, ParamMap const& params )
{
  return Evaluator( inputs, params ).run( program );
}

} // namespace revs
