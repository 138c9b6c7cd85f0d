#include <doctest.h>

#include <revs/circuit.hpp>

#include <random>
#include <sstream>

using namespace revs;

namespace
{

Circuit random_circuit( std::mt19937_64& rng, std::size_t width, std::size_t gates )
{
  Circuit c;
  c.width = width;
  c.num_inputs = width;
  for ( std::size_t i = 0; i < gates; ++i )
  {
    Wire t = rng() % width, a, b;
    do
      a = rng() % width;
    while ( a == t );
    do
      b = rng() % width;
    while ( b == t || b == a );
    switch ( rng() % 3 )
    {
    case 0: c.gates.push_back( Gate::toffoli( a, b, t ) ); break;
    case 1: c.gates.push_back( Gate::cnot( a, t ) ); break;
    default: c.gates.push_back( Gate::not_gate( t ) ); break;
    }
  }
  return c;
}

BitVector random_bits( std::mt19937_64& rng, std::size_t n )
{
  BitVector v( n );
  for ( std::size_t i = 0; i < n; ++i )
    v.set( i, rng() & 1u );
  return v;
}

} // namespace

TEST_CASE( "Toffoli truth table" )
{
  Circuit c;
  c.width = 3;
  c.gates = { Gate::toffoli( 0, 1, 2 ) };
  CHECK( simulate( c, BitVector::from_string( "110" ) ) == BitVector::from_string( "111" ) );
  CHECK( simulate( c, BitVector::from_string( "100" ) ) == BitVector::from_string( "100" ) );
  CHECK( simulate( c, BitVector::from_string( "111" ) ) == BitVector::from_string( "110" ) );
}

TEST_CASE( "every gate is self-inverse on all local states" )
{
  for ( auto g : { Gate::toffoli( 0, 1, 2 ), Gate::cnot( 0, 2 ), Gate::not_gate( 2 ) } )
    for ( unsigned s = 0; s < 8; ++s )
    {
      BitVector v( 3 );
      for ( unsigned i = 0; i < 3; ++i )
        v.set( i, s >> i & 1u );
      auto w = v;
      apply_gate( g, w );
      apply_gate( g, w );
      CHECK( w == v );
    }
}

TEST_CASE( "zero is a fixed point without NOT gates" )
{
  std::mt19937_64 rng( 3 );
  auto c = random_circuit( rng, 10, 200 );
  std::erase_if( c.gates, []( Gate const& g ) { return g.kind == GateKind::not_; } );
  CHECK( simulate( c, BitVector( 10 ) ) == BitVector( 10 ) );
}

TEST_CASE( "reverse undoes the circuit" )
{
  std::mt19937_64 rng( 5 );
  auto c = random_circuit( rng, 12, 300 );
  CHECK( reverse( reverse( c ) ) == c );
  for ( int i = 0; i < 100; ++i )
  {
    auto v = random_bits( rng, 12 );
    CHECK( simulate( reverse( c ), simulate( c, v ) ) == v );
  }
}

TEST_CASE( "simulate is a bijection" )
{
  std::mt19937_64 rng( 11 );
  auto c = random_circuit( rng, 10, 120 );
  std::vector<char> seen( 1024, 0 );
  for ( unsigned s = 0; s < 1024; ++s )
  {
    BitVector v( 10 );
    for ( unsigned i = 0; i < 10; ++i )
      v.set( i, s >> i & 1u );
    auto w = simulate( c, v );
    unsigned x = 0;
    for ( unsigned i = 0; i < 10; ++i )
      x |= unsigned( w.get( i ) ) << i;
    CHECK( !seen[x] );
    seen[x] = 1;
  }
}

TEST_CASE( "bit-sliced simulation agrees with the scalar simulator" )
{
  std::mt19937_64 rng( 17 );
  auto c = random_circuit( rng, 9, 150 );
  std::vector<std::uint64_t> lanes( 9 );
  for ( auto& l : lanes )
    l = rng();
  auto before = lanes;
  simulate_lanes( c.gates, lanes );
  for ( unsigned k = 0; k < 64; ++k )
  {
    BitVector v( 9 );
    for ( unsigned i = 0; i < 9; ++i )
      v.set( i, before[i] >> k & 1u );
    auto w = simulate( c, v );
    for ( unsigned i = 0; i < 9; ++i )
      CHECK( w.get( i ) == bool( lanes[i] >> k & 1u ) );
  }
}

TEST_CASE( "stats count gates by kind" )
{
  Circuit c;
  c.width = 4;
  c.gates = { Gate::toffoli( 0, 1, 2 ), Gate::cnot( 2, 3 ), Gate::not_gate( 3 ), Gate::toffoli( 0, 1, 2 ) };
  auto s = stats( c );
  CHECK( s.toffoli_count == 2 );
  CHECK( s.cnot_count == 1 );
  CHECK( s.not_count == 1 );
  CHECK( s.qubit_count == 4 );
}

TEST_CASE( "validate rejects malformed gates" )
{
  Circuit c;
  c.width = 3;
  c.gates = { Gate::cnot( 1, 1 ) };
  CHECK_THROWS_AS( c.validate(), circuit_error );
  c.gates = { Gate::toffoli( 0, 0, 2 ) };
  CHECK_THROWS_AS( c.validate(), circuit_error );
  c.gates = { Gate::not_gate( 3 ) };
  CHECK_THROWS_AS( c.validate(), circuit_error );
  c.gates = { Gate::toffoli( 0, 1, 2 ) };
  c.outputs = { 2, 2 };
  CHECK_THROWS_AS( c.validate(), circuit_error );
}

TEST_CASE( "circuit text format round-trips" )
{
  std::mt19937_64 rng( 23 );
  auto c = random_circuit( rng, 7, 40 );
  c.num_inputs = 3;
  c.outputs = { 5, 6 };
  std::stringstream ss;
  write_circuit( ss, c );
  CHECK( read_circuit( ss ) == c );
}
