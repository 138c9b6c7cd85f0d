#include <revs/boolexpr.hpp>

#include <algorithm>

namespace revs
{

BoolExp make_var( std::uint32_t v )
{
  BoolExp e;
  e.kind = ExprKind::var;
  e.var = v;
  return e;
}

BoolExp make_const( bool b )
{
  BoolExp e;
  e.kind = ExprKind::constant;
  e.value = b;
  return e;
}

BoolExp make_not( BoolExp e )
{
  if ( e.kind == ExprKind::constant )
    return make_const( !e.value );
  if ( e.kind == ExprKind::not_ )
    return std::move( e.children[0] );
  BoolExp n;
  n.kind = ExprKind::not_;
  n.children.push_back( std::move( e ) );
  return n;
}

BoolExp make_and( std::vector<BoolExp> children )
{
  std::vector<BoolExp> flat;
  auto add = [&]( BoolExp&& c ) {
    if ( std::find( flat.begin(), flat.end(), c ) == flat.end() )
      flat.push_back( std::move( c ) );
  };
  for ( auto& c : children )
  {
    if ( c.kind == ExprKind::constant )
    {
      if ( !c.value )
        return make_const( false );
      continue;
    }
    if ( c.kind == ExprKind::and_ )
      for ( auto& g : c.children )
        add( std::move( g ) );
    else
      add( std::move( c ) );
  }
  if ( flat.empty() )
    return make_const( true );
  if ( flat.size() == 1 )
    return std::move( flat[0] );
  BoolExp e;
  e.kind = ExprKind::and_;
  e.children = std::move( flat );
  return e;
}

BoolExp make_xor( std::vector<BoolExp> children )
{
  std::vector<BoolExp> flat;
  bool parity = false;
  // Xor children never carry a top-level Not or a constant, so one level of
  // unwrapping per child is enough.
  auto add = [&]( auto&& self, BoolExp&& c ) -> void {
    switch ( c.kind )
    {
    case ExprKind::constant:
      parity ^= c.value;
      break;
    case ExprKind::not_:
      parity = !parity;
      self( self, std::move( c.children[0] ) );
      break;
    case ExprKind::xor_:
      for ( auto& g : c.children )
        self( self, std::move( g ) );
      break;
    default:
      flat.push_back( std::move( c ) );
    }
  };
  for ( auto& c : children )
    add( add, std::move( c ) );
  if ( flat.empty() )
    return make_const( parity );
  BoolExp e;
  if ( flat.size() == 1 )
    e = std::move( flat[0] );
  else
  {
    e.kind = ExprKind::xor_;
    e.children = std::move( flat );
  }
  return parity ? make_not( std::move( e ) ) : e;
}

BoolExp make_or( BoolExp a, BoolExp b )
{
  auto both = make_and( { a, b } );
  return make_xor( { std::move( a ), std::move( b ), std::move( both ) } );
}

bool eval( BoolExp const& e, std::function<bool( std::uint32_t )> const& env )
{
  switch ( e.kind )
  {
  case ExprKind::var: return env( e.var );
  case ExprKind::constant: return e.value;
  case ExprKind::not_: return !eval( e.children[0], env );
  case ExprKind::and_:
    for ( auto const& c : e.children )
      if ( !eval( c, env ) )
        return false;
    return true;
  case ExprKind::xor_:
  {
    bool r = false;
    for ( auto const& c : e.children )
      r ^= eval( c, env );
    return r;
  }
  }
  return false;
}

void collect_vars( BoolExp const& e, std::vector<std::uint32_t>& out )
{
  if ( e.kind == ExprKind::var )
  {
    if ( std::find( out.begin(), out.end(), e.var ) == out.end() )
      out.push_back( e.var );
    return;
  }
  for ( auto const& c : e.children )
    collect_vars( c, out );
}

bool mentions( BoolExp const& e, std::uint32_t v )
{
  if ( e.kind == ExprKind::var )
    return e.var == v;
  return std::any_of( e.children.begin(), e.children.end(), [&]( auto const& c ) { return mentions( c, v ); } );
}

BoolExp rename( BoolExp const& e, std::function<std::uint32_t( std::uint32_t )> const& f )
{
  if ( e.kind == ExprKind::var )
    return make_var( f( e.var ) );
  auto r = e;
  for ( auto& c : r.children )
    c = rename( c, f );
  return r;
}

namespace
{

void synth( BoolExp const& e, Wire target, AncillaHeap& heap, std::vector<Gate>& out );

/// Toffoli chain for target ^= AND(controls); controls are distinct wires.
void multi_control( std::vector<Wire> const& controls, Wire target, AncillaHeap& heap, std::vector<Gate>& out )
{
  auto const k = controls.size();
  if ( k == 0 )
  {
    out.push_back( Gate::not_gate( target ) );
    return;
  }
  if ( k == 1 )
  {
    out.push_back( Gate::cnot( controls[0], target ) );
    return;
  }
  if ( k == 2 )
  {
    out.push_back( Gate::toffoli( controls[0], controls[1], target ) );
    return;
  }
  std::vector<Gate> chain;
  std::vector<Wire> anc;
  Wire acc = controls[0];
  for ( std::size_t i = 1; i + 1 < k; ++i )
  {
    auto a = heap.alloc();
    anc.push_back( a );
    chain.push_back( Gate::toffoli( acc, controls[i], a ) );
    acc = a;
  }
  out.insert( out.end(), chain.begin(), chain.end() );
  out.push_back( Gate::toffoli( acc, controls[k - 1], target ) );
  out.insert( out.end(), chain.rbegin(), chain.rend() );
  for ( auto it = anc.rbegin(); it != anc.rend(); ++it )
    heap.release( *it );
}

void synth_and( BoolExp const& e, Wire target, AncillaHeap& heap, std::vector<Gate>& out )
{
  std::vector<Wire> controls( e.children.size() );
  std::vector<Wire> flipped;
  std::vector<std::pair<Wire, std::vector<Gate>>> computed;
  std::vector<char> taken;
  auto used = [&]( Wire w ) {
    for ( std::size_t i = 0; i < taken.size(); ++i )
      if ( taken[i] && controls[i] == w )
        return true;
    return false;
  };
  taken.assign( e.children.size(), 0 );

  // A wire that shows up both plain and negated cannot be flipped in place.
  std::vector<Wire> plain;
  for ( auto const& c : e.children )
    if ( c.is_var() )
      plain.push_back( c.var );

  // Literals become controls directly; negated ones are flipped in place.
  std::vector<std::size_t> compound;
  for ( std::size_t i = 0; i < e.children.size(); ++i )
  {
    auto const& c = e.children[i];
    if ( c.is_var() && !used( c.var ) )
    {
      controls[i] = c.var;
      taken[i] = 1;
    }
    else if ( c.is_literal() && !c.is_var() && !used( c.children[0].var ) &&
              std::find( plain.begin(), plain.end(), c.children[0].var ) == plain.end() )
    {
      controls[i] = c.children[0].var;
      taken[i] = 1;
      flipped.push_back( controls[i] );
    }
    else
      compound.push_back( i );
  }

  // Compound children read unflipped wires, so they go first and last.
  for ( auto i : compound )
  {
    auto a = heap.alloc();
    std::vector<Gate> gates;
    synth( e.children[i], a, heap, gates );
    out.insert( out.end(), gates.begin(), gates.end() );
    computed.emplace_back( a, std::move( gates ) );
    controls[i] = a;
  }
  for ( auto w : flipped )
    out.push_back( Gate::not_gate( w ) );

  multi_control( controls, target, heap, out );

  for ( auto it = flipped.rbegin(); it != flipped.rend(); ++it )
    out.push_back( Gate::not_gate( *it ) );
  for ( auto it = computed.rbegin(); it != computed.rend(); ++it )
  {
    out.insert( out.end(), it->second.rbegin(), it->second.rend() );
    heap.release( it->first );
  }
}

void synth( BoolExp const& e, Wire target, AncillaHeap& heap, std::vector<Gate>& out )
{
  switch ( e.kind )
  {
  case ExprKind::constant:
    if ( e.value )
      out.push_back( Gate::not_gate( target ) );
    break;
  case ExprKind::var:
    out.push_back( Gate::cnot( e.var, target ) );
    break;
  case ExprKind::not_:
    synth( e.children[0], target, heap, out );
    out.push_back( Gate::not_gate( target ) );
    break;
  case ExprKind::xor_:
    for ( auto const& c : e.children )
      synth( c, target, heap, out );
    break;
  case ExprKind::and_:
    synth_and( e, target, heap, out );
    break;
  }
}

std::uint32_t max_var( BoolExp const& e )
{
  std::uint32_t m = 0;
  if ( e.kind == ExprKind::var )
    m = e.var;
  for ( auto const& c : e.children )
    m = std::max( m, max_var( c ) );
  return m;
}

/// Synthesizes onto wires above every variable so nothing collides.
std::pair<std::vector<Gate>, std::size_t> scratch( BoolExp const& e )
{
  auto const t = max_var( e ) + 1;
  AncillaHeap heap( t + 1 );
  std::vector<Gate> gates;
  synth( e, t, heap, gates );
  return { std::move( gates ), heap.high_water() };
}

} // namespace

void synthesize( BoolExp const& e, Wire target, AncillaHeap& heap, std::vector<Gate>& out )
{
  if ( mentions( e, target ) )
    throw expr_error( "synthesis target " + std::to_string( target ) + " appears in its own expression" );
  synth( e, target, heap, out );
}

std::size_t and_cost( BoolExp const& e )
{
  auto gates = scratch( e ).first;
  return std::count_if( gates.begin(), gates.end(), []( Gate const& g ) { return g.kind == GateKind::toffoli; } );
}

std::size_t ancilla_need( BoolExp const& e )
{
  return scratch( e ).second;
}

std::string to_string( BoolExp const& e, std::function<std::string( std::uint32_t )> const& name )
{
  switch ( e.kind )
  {
  case ExprKind::var: return name( e.var );
  case ExprKind::constant: return e.value ? "true" : "false";
  case ExprKind::not_: return "not " + to_string( e.children[0], name );
  case ExprKind::and_:
  case ExprKind::xor_:
  {
    std::string s = "(";
    for ( std::size_t i = 0; i < e.children.size(); ++i )
    {
      if ( i )
        s += e.kind == ExprKind::and_ ? " && " : " <> ";
      s += to_string( e.children[i], name );
    }
    return s + ")";
  }
  }
  return {};
}

} // namespace revs
