#include <revs/frontend.hpp>

#include <sstream>
#include <unordered_map>

namespace revs
{

std::size_t FlatProgram::num_input_bits() const
{
  std::size_t n = 0;
  for ( auto const& in : inputs )
    n += in.locs.size();
  return n;
}

std::vector<Loc> FlatProgram::input_locs() const
{
  std::vector<Loc> r;
  for ( auto const& in : inputs )
    r.insert( r.end(), in.locs.begin(), in.locs.end() );
  return r;
}

std::string FlatProgram::loc_name( Loc l ) const
{
  for ( auto const& in : inputs )
    for ( std::size_t i = 0; i < in.locs.size(); ++i )
      if ( in.locs[i] == l )
        return in.is_array ? in.name + ".[" + std::to_string( i ) + "]" : in.name;
  return "tmp_" + std::to_string( l );
}

namespace
{

/// Inputs first in register order, then assigned locations in statement order.
FlatProgram canonical( FlatProgram const& p )
{
  std::unordered_map<Loc, Loc> map;
  Loc next = 0;
  for ( auto l : p.input_locs() )
    map[l] = next++;
  for ( auto const& s : p.stmts )
    if ( s.kind == FlatKind::assign && !map.contains( s.loc ) )
      map[s.loc] = next++;
  auto f = [&]( Loc l ) {
    auto it = map.find( l );
    return it == map.end() ? Loc( -1 ) : it->second;
  };
  FlatProgram r;
  r.num_locs = next;
  r.inputs = p.inputs;
  for ( auto& in : r.inputs )
    for ( auto& l : in.locs )
      l = f( l );
  for ( auto const& s : p.stmts )
    r.stmts.push_back( { s.kind, f( s.loc ), rename( s.expr, f ) } );
  for ( auto o : p.outputs )
  {
    if ( !o.is_const )
      o.loc = f( o.loc );
    r.outputs.push_back( o );
  }
  return r;
}

bool same_inputs( std::vector<FlatInput> const& a, std::vector<FlatInput> const& b )
{
  if ( a.size() != b.size() )
    return false;
  for ( std::size_t i = 0; i < a.size(); ++i )
    if ( a[i].name != b[i].name || a[i].is_array != b[i].is_array || a[i].locs != b[i].locs )
      return false;
  return true;
}

} // namespace

bool structurally_equal( FlatProgram const& a, FlatProgram const& b )
{
  auto ca = canonical( a );
  auto cb = canonical( b );
  return same_inputs( ca.inputs, cb.inputs ) && ca.stmts == cb.stmts && ca.outputs == cb.outputs;
}

BitVector interpret( FlatProgram const& p, BitVector const& inputs )
{
  if ( inputs.size() != p.num_input_bits() )
    throw source_error( "expected " + std::to_string( p.num_input_bits() ) + " input bits, got " + std::to_string( inputs.size() ) );
  std::vector<char> value( p.num_locs, 0 );
  std::vector<char> live( p.num_locs, 0 );
  std::size_t k = 0;
  for ( auto l : p.input_locs() )
  {
    value[l] = inputs.get( k++ );
    live[l] = 1;
  }
  auto read = [&]( std::uint32_t l ) -> bool {
    if ( l >= p.num_locs || !live[l] )
      throw source_error( "read of " + p.loc_name( l ) + " outside its lifetime" );
    return value[l];
  };
  for ( auto const& s : p.stmts )
  {
    switch ( s.kind )
    {
    case FlatKind::assign:
      if ( live[s.loc] )
        throw source_error( "assignment to live location " + p.loc_name( s.loc ) );
      value[s.loc] = eval( s.expr, read );
      live[s.loc] = 1;
      break;
    case FlatKind::update:
      read( s.loc );
      value[s.loc] ^= eval( s.expr, read );
      break;
    case FlatKind::clean:
      if ( read( s.loc ) )
        throw source_error( "clean of " + p.loc_name( s.loc ) + " which is not zero" );
      live[s.loc] = 0;
      break;
    }
  }
  BitVector out( p.outputs.size() );
  for ( std::size_t i = 0; i < p.outputs.size(); ++i )
    out.set( i, p.outputs[i].is_const ? p.outputs[i].value : read( p.outputs[i].loc ) );
  return out;
}

std::string to_source( FlatProgram const& p )
{
  std::unordered_map<Loc, std::string> names;
  for ( auto const& in : p.inputs )
    for ( std::size_t i = 0; i < in.locs.size(); ++i )
      names[in.locs[i]] = in.is_array ? in.name + ".[" + std::to_string( i ) + "]" : in.name;
  auto name = [&]( std::uint32_t l ) {
    auto it = names.find( l );
    return it != names.end() ? it->second : "tmp_" + std::to_string( l );
  };

  std::ostringstream os;
  for ( auto const& in : p.inputs )
  {
    if ( in.is_array )
      os << "let mutable " << in.name << " = Array.zeroCreate " << in.locs.size() << '\n';
    else
      os << "let mutable " << in.name << " = false\n";
  }
  for ( auto const& s : p.stmts )
  {
    auto const n = name( s.loc );
    switch ( s.kind )
    {
    case FlatKind::assign:
      os << "let mutable " << n << " = " << to_string( s.expr, name ) << '\n';
      break;
    case FlatKind::update:
      os << n << " <- " << n << " <> (" << to_string( s.expr, name ) << ")\n";
      break;
    case FlatKind::clean:
      os << "clean " << n << '\n';
      break;
    }
  }
  os << '[';
  for ( std::size_t i = 0; i < p.outputs.size(); ++i )
  {
    auto const& o = p.outputs[i];
    os << ( i ? "; " : "" ) << ( o.is_const ? ( o.value ? "true" : "false" ) : name( o.loc ) );
  }
  os << "]\n";
  return os.str();
}

} // namespace revs
