#include <revs/frontend.hpp>

#include <cmath>
#include <optional>
#include <set>
#include <variant>

namespace revs
{

namespace
{

/// A storage cell holds either a location or a constant bit.
struct Cell
{
  bool has_loc = false;
  Loc loc = 0;
  bool value = false;
};

using Store = std::vector<Cell>;

struct SlotRef
{
  std::shared_ptr<Store> store;
  std::size_t index = 0;
  Cell& cell() const { return ( *store )[index]; }
};

struct Env;

struct IntVal { long long v; };
struct IntArrVal { std::vector<long long> v; };
/// Immutable bit.  `version` pins a variable to the state it was bound in.
struct BitVal { BoolExp e; std::uint32_t version = 0; };
/// Mutable scalar, backed by a one-cell store.
struct MutBit { SlotRef slot; };
/// Arrays are views: slices, rotations and appends share cells.
struct ArrayVal { std::vector<SlotRef> slots; };
struct FnVal { Stmt const* def; std::shared_ptr<Env> closure; };

using Value = std::variant<IntVal, IntArrVal, BitVal, MutBit, ArrayVal, FnVal>;

struct Binding
{
  Value value;
  bool is_mutable = false;
};

struct Env
{
  std::shared_ptr<Env> parent;
  std::map<std::string, Binding> vars;

  Binding* find( std::string const& n )
  {
    for ( auto* e = this; e; e = e->parent.get() )
      if ( auto it = e->vars.find( n ); it != e->vars.end() )
        return &it->second;
    return nullptr;
  }
};

ArrayVal fresh_array( std::size_t n )
{
  ArrayVal a;
  auto store = std::make_shared<Store>( n );
  for ( std::size_t i = 0; i < n; ++i )
    a.slots.push_back( { store, i } );
  return a;
}

SlotRef single_cell( Cell c )
{
  return { std::make_shared<Store>( 1, c ), 0 };
}

/// `e` as `target ^= rest` if target occurs once, as a direct XOR operand.
std::optional<BoolExp> split_inplace( BoolExp const& e, Loc target )
{
  bool parity = false;
  BoolExp const* x = &e;
  if ( x->kind == ExprKind::not_ )
  {
    parity = true;
    x = &x->children[0];
  }
  if ( x->is_var() && x->var == target )
    return make_const( parity );
  if ( x->kind != ExprKind::xor_ )
    return std::nullopt;
  std::vector<BoolExp> rest;
  int hits = 0;
  for ( auto const& c : x->children )
  {
    if ( c.is_var() && c.var == target )
      ++hits;
    else if ( mentions( c, target ) )
      return std::nullopt;
    else
      rest.push_back( c );
  }
  if ( hits != 1 )
    return std::nullopt;
  rest.push_back( make_const( parity ) );
  return make_xor( std::move( rest ) );
}

class Flattener
{
public:
  explicit Flattener( ParamMap const& params ) : params_( params ) {}

  FlatProgram run( SourceProgram const& prog );

private:
  FlatProgram out_;
  std::vector<std::uint32_t> version_;
  std::vector<bool> dead_;
  ParamMap const& params_;
  std::set<std::string> used_params_;
  int call_depth_ = 0;

  [[noreturn]] static void fail( std::string const& msg, int line, int col ) { throw source_error( msg, line, col ); }
  [[noreturn]] static void fail( std::string const& msg, Expr const& at ) { fail( msg, at.line, at.col ); }

  Loc fresh()
  {
    version_.push_back( 0 );
    dead_.push_back( false );
    return out_.num_locs++;
  }

  Loc materialize( BoolExp e )
  {
    auto l = fresh();
    out_.stmts.push_back( { FlatKind::assign, l, std::move( e ) } );
    return l;
  }

  BoolExp read_cell( Cell const& c, Expr const& at )
  {
    if ( !c.has_loc )
      return make_const( c.value );
    if ( dead_[c.loc] )
      fail( "read of a cleaned bit", at );
    return make_var( c.loc );
  }

  BitVal bit_of_cell( Cell const& c, Expr const& at )
  {
    auto e = read_cell( c, at );
    return { e, c.has_loc ? version_[c.loc] : 0u };
  }

  /// Immutable binding of a compound expression gets its own location.
  BitVal settle( BitVal b )
  {
    if ( b.e.is_const() )
      return b;
    if ( b.e.is_var() ) // operands were checked when read, so this is the live version
      return { b.e, version_[b.e.var] };
    auto l = materialize( std::move( b.e ) );
    return { make_var( l ), version_[l] };
  }

  BoolExp bit( Value const& v, Expr const& at )
  {
    if ( auto const* b = std::get_if<BitVal>( &v ) )
      return b->e;
    fail( "expected a boolean", at );
  }

  long long integer( Value const& v, Expr const& at )
  {
    if ( auto const* i = std::get_if<IntVal>( &v ) )
      return i->v;
    fail( "expected a compile-time integer", at );
  }

  ArrayVal const& array( Value const& v, Expr const& at )
  {
    if ( auto const* a = std::get_if<ArrayVal>( &v ) )
      return *a;
    fail( "expected a boolean array", at );
  }

  Value eval( Expr const& e, std::shared_ptr<Env> const& env );
  Value apply( Expr const& e, std::shared_ptr<Env> const& env );
  Value call( FnVal const& f, std::vector<Value> args, Expr const& at );
  ArrayVal list( Expr const& e, std::shared_ptr<Env> const& env );
  std::optional<SlotRef> slot_of( Expr const& e, std::shared_ptr<Env> const& env );

  std::optional<Value> exec_block( Block const& b, std::shared_ptr<Env> const& env, bool top );
  void exec( Stmt const& s, std::shared_ptr<Env> const& env, bool top );
  void let( Stmt const& s, std::shared_ptr<Env> const& env, bool top );
  void assign_cell( SlotRef const& slot, Expr const& rhs, std::shared_ptr<Env> const& env );
  void clean_cell( Cell& c );
  void output( Value const& v, Expr const& at );
};

Value Flattener::eval( Expr const& e, std::shared_ptr<Env> const& env )
{
  switch ( e.tag )
  {
  case ExprTag::bool_lit:
    return BitVal{ make_const( e.value != 0 ) };
  case ExprTag::int_lit:
    return IntVal{ e.value };
  case ExprTag::ident:
  {
    auto* b = env->find( e.name );
    if ( !b )
    {
      if ( e.name == "not" || e.name == "rot" || e.name.starts_with( "Array." ) || e.name == "isqrt" )
        fail( "builtin '" + e.name + "' needs arguments", e );
      fail( "unknown identifier '" + e.name + "'", e );
    }
    if ( auto const* m = std::get_if<MutBit>( &b->value ) )
      return bit_of_cell( m->slot.cell(), e );
    if ( auto const* bv = std::get_if<BitVal>( &b->value ) )
    {
      if ( bv->e.is_var() && ( dead_[bv->e.var] || version_[bv->e.var] != bv->version ) )
        fail( "'" + e.name + "' refers to a bit that has since been overwritten", e );
    }
    return b->value;
  }
  case ExprTag::index:
  {
    auto base = eval( *e.args[0], env );
    auto i = integer( eval( *e.args[1], env ), *e.args[1] );
    if ( auto const* ia = std::get_if<IntArrVal>( &base ) )
    {
      if ( i < 0 || i >= static_cast<long long>( ia->v.size() ) )
        fail( "index " + std::to_string( i ) + " out of range", e );
      return IntVal{ ia->v[i] };
    }
    auto const& a = array( base, *e.args[0] );
    if ( i < 0 || i >= static_cast<long long>( a.slots.size() ) )
      fail( "index " + std::to_string( i ) + " out of range for array of length " + std::to_string( a.slots.size() ), e );
    return bit_of_cell( a.slots[i].cell(), e );
  }
  case ExprTag::slice:
  {
    auto base = eval( *e.args[0], env );
    auto const& a = array( base, *e.args[0] );
    auto lo = integer( eval( *e.args[1], env ), *e.args[1] );
    auto hi = integer( eval( *e.args[2], env ), *e.args[2] );
    auto const n = static_cast<long long>( a.slots.size() );
    if ( hi < lo )
      return ArrayVal{};
    if ( lo < 0 || hi >= n )
      fail( "slice " + std::to_string( lo ) + ".." + std::to_string( hi ) + " out of range for array of length " + std::to_string( n ), e );
    return ArrayVal{ { a.slots.begin() + lo, a.slots.begin() + hi + 1 } };
  }
  case ExprTag::apply:
    return apply( e, env );
  case ExprTag::binary:
  {
    auto lhs = eval( *e.args[0], env );
    auto rhs = eval( *e.args[1], env );
    auto const& op = e.name;
    if ( op == "&&" || op == "||" || op == "<>" )
    {
      auto a = bit( lhs, *e.args[0] );
      auto b = bit( rhs, *e.args[1] );
      if ( op == "&&" )
        return BitVal{ make_and( { std::move( a ), std::move( b ) } ) };
      if ( op == "||" )
        return BitVal{ make_or( std::move( a ), std::move( b ) ) };
      return BitVal{ make_xor( { std::move( a ), std::move( b ) } ) };
    }
    auto a = integer( lhs, *e.args[0] );
    auto b = integer( rhs, *e.args[1] );
    if ( op == "+" )
      return IntVal{ a + b };
    if ( op == "-" )
      return IntVal{ a - b };
    if ( op == "*" )
      return IntVal{ a * b };
    if ( b == 0 )
      fail( "division by zero", e );
    return IntVal{ op == "/" ? a / b : a % b };
  }
  case ExprTag::negate:
    return IntVal{ -integer( eval( *e.args[0], env ), *e.args[0] ) };
  case ExprTag::list:
    return list( e, env );
  case ExprTag::int_array:
  {
    IntArrVal r;
    for ( auto const& a : e.args )
      r.v.push_back( integer( eval( *a, env ), *a ) );
    return r;
  }
  }
  fail( "unsupported expression", e );
}

Value Flattener::apply( Expr const& e, std::shared_ptr<Env> const& env )
{
  auto const& n = e.name;
  auto arity = [&]( std::size_t k ) {
    if ( e.args.size() != k )
      fail( "'" + n + "' takes " + std::to_string( k ) + " argument(s)", e );
  };
  if ( !env->find( n ) )
  {
    if ( n == "not" )
    {
      arity( 1 );
      return BitVal{ make_not( bit( eval( *e.args[0], env ), *e.args[0] ) ) };
    }
    if ( n == "rot" )
    {
      arity( 2 );
      auto k = integer( eval( *e.args[0], env ), *e.args[0] );
      auto v = eval( *e.args[1], env );
      auto const& a = array( v, *e.args[1] );
      auto const len = static_cast<long long>( a.slots.size() );
      ArrayVal r;
      if ( len == 0 )
        return r;
      for ( long long i = 0; i < len; ++i )
        r.slots.push_back( a.slots[( ( i + k ) % len + len ) % len] );
      return r;
    }
    if ( n == "Array.zeroCreate" )
    {
      arity( 1 );
      auto k = integer( eval( *e.args[0], env ), *e.args[0] );
      if ( k < 0 )
        fail( "negative array size", e );
      return fresh_array( k );
    }
    if ( n == "Array.append" )
    {
      arity( 2 );
      auto a = eval( *e.args[0], env );
      auto b = eval( *e.args[1], env );
      auto r = array( a, *e.args[0] );
      auto const& rb = array( b, *e.args[1] );
      r.slots.insert( r.slots.end(), rb.slots.begin(), rb.slots.end() );
      return r;
    }
    if ( n == "Array.concat" )
    {
      arity( 1 );
      if ( e.args[0]->tag != ExprTag::list )
        fail( "Array.concat expects a list literal", e );
      ArrayVal r;
      for ( auto const& item : e.args[0]->args )
      {
        auto v = eval( *item, env );
        auto const& a = array( v, *item );
        r.slots.insert( r.slots.end(), a.slots.begin(), a.slots.end() );
      }
      return r;
    }
    if ( n == "Array.length" )
    {
      arity( 1 );
      auto v = eval( *e.args[0], env );
      if ( auto const* ia = std::get_if<IntArrVal>( &v ) )
        return IntVal{ static_cast<long long>( ia->v.size() ) };
      return IntVal{ static_cast<long long>( array( v, *e.args[0] ).slots.size() ) };
    }
    if ( n == "isqrt" )
    {
      arity( 1 );
      auto k = integer( eval( *e.args[0], env ), *e.args[0] );
      if ( k < 0 )
        fail( "isqrt of a negative number", e );
      auto r = static_cast<long long>( std::sqrt( static_cast<double>( k ) ) );
      while ( r * r > k )
        --r;
      while ( ( r + 1 ) * ( r + 1 ) <= k )
        ++r;
      return IntVal{ r };
    }
    fail( "unknown function '" + n + "'", e );
  }
  auto* b = env->find( n );
  auto const* f = std::get_if<FnVal>( &b->value );
  if ( !f )
    fail( "'" + n + "' is not a function", e );
  std::vector<Value> args;
  for ( auto const& a : e.args )
    args.push_back( eval( *a, env ) );
  return call( *f, std::move( args ), e );
}

Value Flattener::call( FnVal const& f, std::vector<Value> args, Expr const& at )
{
  auto const& def = *f.def;
  if ( args.size() != def.params.size() )
    fail( "'" + def.name + "' takes " + std::to_string( def.params.size() ) + " argument(s), got " + std::to_string( args.size() ), at );
  if ( ++call_depth_ > 256 )
    fail( "call nesting too deep", at );
  auto env = std::make_shared<Env>();
  env->parent = f.closure;
  for ( std::size_t i = 0; i < args.size(); ++i )
  {
    if ( auto* bv = std::get_if<BitVal>( &args[i] ) )
      args[i] = settle( std::move( *bv ) );
    env->vars[def.params[i]] = { std::move( args[i] ), false };
  }
  auto r = exec_block( def.body, env, false );
  --call_depth_;
  if ( auto* bv = std::get_if<BitVal>( &*r ) )
    return settle( std::move( *bv ) );
  return *r;
}

/// Location-preserving reference for list elements that name a cell.
std::optional<SlotRef> Flattener::slot_of( Expr const& e, std::shared_ptr<Env> const& env )
{
  if ( e.tag == ExprTag::ident )
  {
    auto* b = env->find( e.name );
    if ( b )
      if ( auto const* m = std::get_if<MutBit>( &b->value ) )
        return m->slot;
  }
  if ( e.tag == ExprTag::index )
  {
    auto base = eval( *e.args[0], env );
    if ( auto const* a = std::get_if<ArrayVal>( &base ) )
    {
      auto i = integer( eval( *e.args[1], env ), *e.args[1] );
      if ( i < 0 || i >= static_cast<long long>( a->slots.size() ) )
        fail( "index " + std::to_string( i ) + " out of range", e );
      return a->slots[i];
    }
  }
  return std::nullopt;
}

ArrayVal Flattener::list( Expr const& e, std::shared_ptr<Env> const& env )
{
  ArrayVal r;
  for ( auto const& item : e.args )
  {
    if ( auto s = slot_of( *item, env ) )
    {
      r.slots.push_back( *s );
      continue;
    }
    auto v = eval( *item, env );
    if ( auto const* a = std::get_if<ArrayVal>( &v ) )
    {
      r.slots.insert( r.slots.end(), a->slots.begin(), a->slots.end() );
      continue;
    }
    auto b = settle( { bit( v, *item ) } );
    Cell c;
    if ( b.e.is_var() )
    {
      c.has_loc = true;
      c.loc = b.e.var;
    }
    else
      c.value = b.e.value;
    r.slots.push_back( single_cell( c ) );
  }
  return r;
}

std::optional<Value> Flattener::exec_block( Block const& b, std::shared_ptr<Env> const& env, bool top )
{
  for ( std::size_t i = 0; i < b.size(); ++i )
  {
    auto const& s = b[i];
    if ( i + 1 == b.size() && s.tag == StmtTag::expr )
      return eval( *s.value, env );
    exec( s, env, top );
  }
  return std::nullopt;
}

void Flattener::exec( Stmt const& s, std::shared_ptr<Env> const& env, bool top )
{
  switch ( s.tag )
  {
  case StmtTag::let:
    let( s, env, top );
    break;
  case StmtTag::assign:
  {
    auto* b = env->find( s.name );
    if ( !b )
      fail( "unknown identifier '" + s.name + "'", s.line, s.col );
    if ( !b->is_mutable )
      fail( "assignment to immutable binding '" + s.name + "'", s.line, s.col );
    if ( auto const* m = std::get_if<MutBit>( &b->value ) )
    {
      auto slot = m->slot;
      assign_cell( slot, *s.value, env );
      break;
    }
    auto v = eval( *s.value, env );
    if ( b->value.index() != v.index() )
      fail( "assignment changes the type of '" + s.name + "'", s.line, s.col );
    b->value = std::move( v );
    break;
  }
  case StmtTag::index_assign:
  {
    auto* b = env->find( s.name );
    if ( !b )
      fail( "unknown identifier '" + s.name + "'", s.line, s.col );
    auto const* a = std::get_if<ArrayVal>( &b->value );
    if ( !a )
      fail( "'" + s.name + "' is not a boolean array", s.line, s.col );
    auto i = integer( eval( *s.index, env ), *s.index );
    if ( i < 0 || i >= static_cast<long long>( a->slots.size() ) )
      fail( "index " + std::to_string( i ) + " out of range for '" + s.name + "'", s.line, s.col );
    auto slot = a->slots[i];
    assign_cell( slot, *s.value, env );
    break;
  }
  case StmtTag::for_:
  {
    auto lo = integer( eval( *s.lo, env ), *s.lo );
    auto hi = integer( eval( *s.hi, env ), *s.hi );
    for ( auto i = lo; i <= hi; ++i )
    {
      auto inner = std::make_shared<Env>();
      inner->parent = env;
      inner->vars[s.name] = { IntVal{ i }, false };
      if ( auto v = exec_block( s.body, inner, false ) )
        (void)v;
    }
    break;
  }
  case StmtTag::clean:
  {
    auto* b = env->find( s.name );
    if ( !b )
      fail( "unknown identifier '" + s.name + "'", s.line, s.col );
    if ( s.index )
    {
      auto const* a = std::get_if<ArrayVal>( &b->value );
      if ( !a )
        fail( "'" + s.name + "' is not a boolean array", s.line, s.col );
      auto i = integer( eval( *s.index, env ), *s.index );
      if ( i < 0 || i >= static_cast<long long>( a->slots.size() ) )
        fail( "index out of range", s.line, s.col );
      clean_cell( a->slots[i].cell() );
    }
    else if ( auto const* m = std::get_if<MutBit>( &b->value ) )
      clean_cell( m->slot.cell() );
    else if ( auto const* a = std::get_if<ArrayVal>( &b->value ) )
      for ( auto const& sl : a->slots )
        clean_cell( sl.cell() );
    else if ( auto const* bv = std::get_if<BitVal>( &b->value ); bv && bv->e.is_var() )
    {
      Cell c{ true, bv->e.var, false };
      clean_cell( c );
    }
    else
      fail( "'" + s.name + "' cannot be cleaned", s.line, s.col );
    break;
  }
  case StmtTag::expr:
    eval( *s.value, env );
    break;
  }
}

void Flattener::clean_cell( Cell& c )
{
  if ( !c.has_loc )
  {
    if ( c.value )
      throw source_error( "clean of a bit that is constant true" );
    return;
  }
  if ( dead_[c.loc] )
    throw source_error( "bit cleaned twice" );
  out_.stmts.push_back( { FlatKind::clean, c.loc, make_const( false ) } );
  dead_[c.loc] = true;
  ++version_[c.loc];
  c = Cell{};
}

void Flattener::assign_cell( SlotRef const& slot, Expr const& rhs, std::shared_ptr<Env> const& env )
{
  auto e = bit( eval( rhs, env ), rhs );
  auto& c = slot.cell();
  if ( c.has_loc )
  {
    if ( auto rest = split_inplace( e, c.loc ) )
    {
      if ( !rest->is_const() || rest->value )
      {
        out_.stmts.push_back( { FlatKind::update, c.loc, std::move( *rest ) } );
        ++version_[c.loc];
      }
      return;
    }
  }
  if ( e.is_const() )
  {
    c = Cell{ false, 0, e.value };
    return;
  }
  c = Cell{ true, materialize( std::move( e ) ), false };
}

void Flattener::let( Stmt const& s, std::shared_ptr<Env> const& env, bool top )
{
  if ( s.is_function() )
  {
    env->vars[s.name] = { FnVal{ &s, env }, false };
    return;
  }
  Expr const* single = s.body.size() == 1 ? s.body[0].value.get() : nullptr;
  if ( top && single )
  {
    if ( single->tag == ExprTag::apply && single->name == "Array.zeroCreate" && !env->find( single->name ) )
    {
      auto v = eval( *single, env );
      auto arr = std::get<ArrayVal>( v );
      FlatInput in{ s.name, true, {} };
      for ( auto& sl : arr.slots )
      {
        auto l = fresh();
        in.locs.push_back( l );
        sl.cell() = Cell{ true, l, false };
      }
      out_.inputs.push_back( std::move( in ) );
      env->vars[s.name] = { std::move( arr ), s.is_mutable };
      return;
    }
    if ( single->tag == ExprTag::bool_lit && single->value == 0 )
    {
      auto l = fresh();
      out_.inputs.push_back( { s.name, false, { l } } );
      if ( s.is_mutable )
        env->vars[s.name] = { MutBit{ single_cell( Cell{ true, l, false } ) }, true };
      else
        env->vars[s.name] = { BitVal{ make_var( l ), 0 }, false };
      return;
    }
    if ( auto p = params_.find( s.name ); p != params_.end() )
    {
      auto v = eval( *single, env );
      if ( !std::holds_alternative<IntVal>( v ) )
        fail( "parameter '" + s.name + "' is not an integer binding", s.line, s.col );
      used_params_.insert( s.name );
      env->vars[s.name] = { IntVal{ p->second }, s.is_mutable };
      return;
    }
  }
  auto inner = std::make_shared<Env>();
  inner->parent = env;
  auto v = *exec_block( s.body, inner, false );
  if ( auto* bv = std::get_if<BitVal>( &v ) )
  {
    if ( s.is_mutable )
    {
      Cell c;
      if ( bv->e.is_const() )
        c.value = bv->e.value;
      else
        c = Cell{ true, materialize( std::move( bv->e ) ), false };
      env->vars[s.name] = { MutBit{ single_cell( c ) }, true };
      return;
    }
    v = settle( std::move( *bv ) );
  }
  env->vars[s.name] = { std::move( v ), s.is_mutable };
}

void Flattener::output( Value const& v, Expr const& at )
{
  if ( auto const* a = std::get_if<ArrayVal>( &v ) )
  {
    for ( auto const& sl : a->slots )
    {
      auto const& c = sl.cell();
      if ( c.has_loc && dead_[c.loc] )
        fail( "output of a cleaned bit", at );
      out_.outputs.push_back( c.has_loc ? FlatOutput{ false, false, c.loc } : FlatOutput{ true, c.value, 0 } );
    }
    return;
  }
  if ( auto const* b = std::get_if<BitVal>( &v ) )
  {
    auto s = settle( *b );
    if ( s.e.is_const() )
      out_.outputs.push_back( { true, s.e.value, 0 } );
    else
      out_.outputs.push_back( { false, false, s.e.var } );
    return;
  }
  fail( "the result must be a boolean or a boolean array", at );
}

FlatProgram Flattener::run( SourceProgram const& prog )
{
  auto global = std::make_shared<Env>();
  auto const& items = prog.items;
  if ( items.empty() )
    throw source_error( "no output expression" );
  for ( std::size_t i = 0; i + 1 < items.size(); ++i )
    exec( items[i], global, true );
  auto const& last = items.back();
  if ( last.tag == StmtTag::expr )
    output( eval( *last.value, global ), *last.value );
  else if ( last.is_function() )
  {
    // A trailing function is the entry point; its parameters are input bits.
    std::vector<Value> args;
    for ( auto const& p : last.params )
    {
      auto l = fresh();
      out_.inputs.push_back( { p, false, { l } } );
      args.push_back( BitVal{ make_var( l ), 0 } );
    }
    Expr at;
    at.tag = ExprTag::apply;
    at.line = last.line;
    at.col = last.col;
    output( call( FnVal{ &last, global }, std::move( args ), at ), at );
  }
  else
    fail( "no output expression", last.line, last.col );
  for ( auto const& [name, value] : params_ )
    if ( !used_params_.contains( name ) )
      throw source_error( "unknown parameter '" + name + "'" );
  return std::move( out_ );
}

} // namespace

FlatProgram flatten( SourceProgram const& program, ParamMap const& params )
{
  return Flattener( params ).run( program );
}

} // namespace revs
