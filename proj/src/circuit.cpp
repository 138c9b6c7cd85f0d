#include <revs/circuit.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace revs
{

BitVector BitVector::from_string( std::string const& bits )
{
  BitVector v( bits.size() );
  for ( std::size_t i = 0; i < bits.size(); ++i )
  {
    if ( bits[i] != '0' && bits[i] != '1' )
      throw std::invalid_argument( "bit string may only contain 0 and 1" );
    v.set( i, bits[i] == '1' );
  }
  return v;
}

std::string BitVector::to_string() const
{
  std::string s( size_, '0' );
  for ( std::size_t i = 0; i < size_; ++i )
    if ( get( i ) )
      s[i] = '1';
  return s;
}

void Circuit::validate() const
{
  auto check = [&]( Wire w ) {
    if ( w >= width )
      throw circuit_error( "wire " + std::to_string( w ) + " out of range for width " + std::to_string( width ) );
  };
  if ( num_inputs > width )
    throw circuit_error( "more inputs than wires" );
  for ( auto const& g : gates )
  {
    check( g.target );
    switch ( g.kind )
    {
    case GateKind::toffoli:
      check( g.control1 );
      check( g.control2 );
      if ( g.control1 == g.control2 || g.control1 == g.target || g.control2 == g.target )
        throw circuit_error( "toffoli wires must be distinct" );
      break;
    case GateKind::cnot:
      check( g.control1 );
      if ( g.control1 == g.target )
        throw circuit_error( "cnot control equals target" );
      break;
    case GateKind::not_:
      break;
    }
  }
  std::unordered_set<Wire> seen;
  for ( auto w : outputs )
  {
    check( w );
    if ( !seen.insert( w ).second )
      throw circuit_error( "duplicate output wire " + std::to_string( w ) );
  }
}

CircuitStats stats( Circuit const& c )
{
  CircuitStats s;
  s.qubit_count = c.width;
  for ( auto const& g : c.gates )
  {
    switch ( g.kind )
    {
    case GateKind::toffoli: ++s.toffoli_count; break;
    case GateKind::cnot: ++s.cnot_count; break;
    case GateKind::not_: ++s.not_count; break;
    }
  }
  return s;
}

void apply_gate( Gate const& g, BitVector& bits )
{
  switch ( g.kind )
  {
  case GateKind::toffoli:
    if ( bits.get( g.control1 ) && bits.get( g.control2 ) )
      bits.flip( g.target );
    break;
  case GateKind::cnot:
    if ( bits.get( g.control1 ) )
      bits.flip( g.target );
    break;
  case GateKind::not_:
    bits.flip( g.target );
    break;
  }
}

BitVector simulate( Circuit const& c, BitVector input )
{
  if ( input.size() != c.width )
    throw circuit_error( "input has " + std::to_string( input.size() ) + " bits, circuit width is " + std::to_string( c.width ) );
  for ( auto const& g : c.gates )
    apply_gate( g, input );
  return input;
}

void simulate_lanes( std::span<Gate const> gates, std::span<std::uint64_t> lanes )
{
  for ( auto const& g : gates )
  {
    switch ( g.kind )
    {
    case GateKind::toffoli: lanes[g.target] ^= lanes[g.control1] & lanes[g.control2]; break;
    case GateKind::cnot: lanes[g.target] ^= lanes[g.control1]; break;
    case GateKind::not_: lanes[g.target] = ~lanes[g.target]; break;
    }
  }
}

std::vector<Gate> reversed_gates( std::span<Gate const> gates )
{
  return { gates.rbegin(), gates.rend() };
}

Circuit reverse( Circuit const& c )
{
  auto r = c;
  std::reverse( r.gates.begin(), r.gates.end() );
  return r;
}

void write_circuit( std::ostream& os, Circuit const& c )
{
  os << "# width: " << c.width << "  inputs: ";
  if ( c.num_inputs == 0 )
    os << "none";
  else
    os << "0.." << c.num_inputs - 1;
  os << "  outputs: ";
  if ( c.outputs.empty() )
    os << "none";
  for ( std::size_t i = 0; i < c.outputs.size(); ++i )
    os << ( i ? "," : "" ) << c.outputs[i];
  os << '\n';
  for ( auto const& g : c.gates )
  {
    switch ( g.kind )
    {
    case GateKind::toffoli: os << "tof " << g.control1 << ' ' << g.control2 << ' ' << g.target << '\n'; break;
    case GateKind::cnot: os << "cnot " << g.control1 << ' ' << g.target << '\n'; break;
    case GateKind::not_: os << "not " << g.target << '\n'; break;
    }
  }
}

namespace
{

std::size_t parse_number( std::string const& s, std::size_t line )
{
  std::size_t pos = 0;
  unsigned long long v = 0;
  try
  {
    v = std::stoull( s, &pos );
  }
  catch ( std::exception const& )
  {
    pos = 0;
  }
  if ( pos != s.size() || s.empty() )
    throw circuit_error( "line " + std::to_string( line ) + ": expected a number, got '" + s + "'" );
  return static_cast<std::size_t>( v );
}

void parse_header( std::string const& text, Circuit& c, std::size_t line )
{
  std::istringstream in( text );
  std::string key;
  in >> key; // '#'
  while ( in >> key )
  {
    std::string value;
    if ( !( in >> value ) )
      throw circuit_error( "line " + std::to_string( line ) + ": header key without value" );
    if ( key == "width:" )
      c.width = parse_number( value, line );
    else if ( key == "inputs:" )
    {
      if ( value == "none" )
        c.num_inputs = 0;
      else
      {
        auto dots = value.find( ".." );
        if ( dots == std::string::npos || value.substr( 0, dots ) != "0" )
          throw circuit_error( "line " + std::to_string( line ) + ": inputs must be written 0..n-1" );
        c.num_inputs = parse_number( value.substr( dots + 2 ), line ) + 1;
      }
    }
    else if ( key == "outputs:" )
    {
      c.outputs.clear();
      if ( value == "none" )
        continue;
      std::istringstream list( value );
      std::string item;
      while ( std::getline( list, item, ',' ) )
        c.outputs.push_back( static_cast<Wire>( parse_number( item, line ) ) );
    }
    else
      throw circuit_error( "line " + std::to_string( line ) + ": unknown header key " + key );
  }
}

} // namespace

Circuit read_circuit( std::istream& is )
{
  Circuit c;
  bool header_seen = false;
  std::string text;
  std::size_t line = 0;
  while ( std::getline( is, text ) )
  {
    ++line;
    if ( text.empty() )
      continue;
    if ( text[0] == '#' )
    {
      if ( !header_seen && text.find( "width:" ) != std::string::npos )
      {
        parse_header( text, c, line );
        header_seen = true;
      }
      continue;
    }
    std::istringstream in( text );
    std::string op;
    std::vector<std::string> args;
    in >> op;
    for ( std::string a; in >> a; )
      args.push_back( a );
    auto wire = [&]( std::size_t i ) { return static_cast<Wire>( parse_number( args[i], line ) ); };
    if ( op == "tof" && args.size() == 3 )
      c.gates.push_back( Gate::toffoli( wire( 0 ), wire( 1 ), wire( 2 ) ) );
    else if ( op == "cnot" && args.size() == 2 )
      c.gates.push_back( Gate::cnot( wire( 0 ), wire( 1 ) ) );
    else if ( op == "not" && args.size() == 1 )
      c.gates.push_back( Gate::not_gate( wire( 0 ) ) );
    else
      throw circuit_error( "line " + std::to_string( line ) + ": malformed gate '" + text + "'" );
  }
  if ( !header_seen )
    throw circuit_error( "missing '# width:' header" );
  c.validate();
  return c;
}

} // namespace revs
