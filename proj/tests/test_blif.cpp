#include <doctest.h>

#include <revs/blif.hpp>
#include <revs/compiler.hpp>
#include <revs/verify.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace revs;

namespace
{

std::string slurp( std::filesystem::path const& p )
{
  std::ifstream in( p );
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string single( std::string const& cubes, std::size_t arity )
{
  std::string s = ".model t\n.inputs";
  std::string names;
  for ( std::size_t i = 0; i < arity; ++i )
  {
    s += " x" + std::to_string( i + 1 );
    names += " x" + std::to_string( i + 1 );
  }
  s += "\n.outputs f\n.names" + names + " f\n" + cubes + ".end\n";
  return s;
}

BitVector bits_of( std::uint64_t v, std::size_t n )
{
  BitVector b( n );
  for ( std::size_t i = 0; i < n; ++i )
    b.set( i, ( v >> i ) & 1u );
  return b;
}

// Independent cover semantics: OR over cubes of AND over literals.
bool cover_value( std::vector<std::string> const& cubes, std::uint64_t x )
{
  for ( auto const& c : cubes )
  {
    bool all = true;
    for ( std::size_t i = 0; i < c.size(); ++i )
      if ( ( c[i] == '1' && !( ( x >> i ) & 1u ) ) || ( c[i] == '0' && ( ( x >> i ) & 1u ) ) )
        all = false;
    if ( all )
      return true;
  }
  return false;
}

std::vector<std::filesystem::path> samples()
{
  std::vector<std::filesystem::path> r;
  for ( auto const& e : std::filesystem::directory_iterator( std::string( REVS_CORPUS_DIR ) + "/blif" ) )
    if ( e.path().extension() == ".blif" )
      r.push_back( e.path() );
  std::sort( r.begin(), r.end() );
  return r;
}

std::size_t toffolis( BlifNetlist const& n, Strategy s = Strategy::eager )
{
  return compile( lower_to_flat( n ), { s, 0 } ).stats.toffoli_count;
}

} // namespace

TEST_CASE( "three-cube cover semantics" )
{
  auto n = parse_blif( single( "0-1 1\n-0- 1\n111 1\n", 3 ) );
  REQUIRE( n.covers.size() == 1 );
  CHECK( n.covers[0].cubes.size() == 3 );
  for ( std::uint64_t x = 0; x < 8; ++x )
  {
    bool x1 = x & 1, x2 = x & 2, x3 = x & 4;
    bool want = ( !x1 && x3 ) || !x2 || ( x1 && x2 && x3 );
    CHECK( evaluate_blif( n, bits_of( x, 3 ) ).get( 0 ) == want );
  }
}

TEST_CASE( "single cubes" )
{
  auto all = parse_blif( single( "---- 1\n", 4 ) );
  for ( std::uint64_t x = 0; x < 16; ++x )
    CHECK( evaluate_blif( all, bits_of( x, 4 ) ).get( 0 ) );
  // columns are x1..x4 from the left; the true rows read 0010, 0011, 1010, 1011
  auto some = parse_blif( single( "-01- 1\n", 4 ) );
  for ( std::uint64_t x = 0; x < 16; ++x )
  {
    std::string row;
    for ( std::size_t i = 0; i < 4; ++i )
      row += ( x >> i ) & 1u ? '1' : '0';
    bool want = row == "0010" || row == "0011" || row == "1010" || row == "1011";
    CHECK( evaluate_blif( some, bits_of( x, 4 ) ).get( 0 ) == want );
  }
}

TEST_CASE( "parse errors" )
{
  CHECK_THROWS_AS( parse_blif( ".model t\n.inputs a\n.outputs q\n.latch a q 0\n.end\n" ), blif_error );
  CHECK_THROWS_AS( parse_blif( ".model t\n.inputs a\n.outputs q\n.subckt foo x=a\n.end\n" ), blif_error );
  CHECK_THROWS_AS( parse_blif( single( "0-2 1\n", 3 ) ), blif_error );
  CHECK_THROWS_AS( parse_blif( single( "01 1\n", 3 ) ), blif_error );
  CHECK_THROWS_AS( parse_blif( single( "011 0\n", 3 ) ), blif_error );
  CHECK_THROWS_AS( parse_blif( ".model t\n.inputs a\n.outputs q\n.names a r q\n11 1\n.names q r\n1 1\n.end\n" ), blif_error );
  CHECK_THROWS_AS( parse_blif( ".model t\n.inputs a\n.outputs q\n.names a b q\n11 1\n.end\n" ), blif_error );
  try
  {
    parse_blif( ".model t\n.inputs a\n.outputs q\n.names a q\n1x 1\n.end\n" );
    FAIL( "expected an error" );
  }
  catch ( blif_error const& e )
  {
    CHECK( std::string( e.what() ).find( "line 5" ) != std::string::npos );
  }
}

TEST_CASE( "mutual exclusion" )
{
  CHECK( mutually_exclusive( Cube::parse( "0-1" ), Cube::parse( "1--" ) ) );
  CHECK_FALSE( mutually_exclusive( Cube::parse( "0-1" ), Cube::parse( "-0-" ) ) );
  CHECK( mutually_exclusive( Cube::parse( "11-" ), Cube::parse( "0-1" ) ) );
  CHECK_THROWS( mutually_exclusive( Cube::parse( "11" ), Cube::parse( "0-1" ) ) );
  // exhaustive agreement with "no input satisfies both"
  std::mt19937_64 rng( 3 );
  auto rnd = [&] {
    std::string s;
    for ( int i = 0; i < 4; ++i )
      s += "01-"[rng() % 3];
    return s;
  };
  for ( int k = 0; k < 300; ++k )
  {
    auto a = rnd(), b = rnd();
    bool both = false;
    for ( std::uint64_t x = 0; x < 16; ++x )
      both |= cover_value( { a }, x ) && cover_value( { b }, x );
    CHECK( mutually_exclusive( Cube::parse( a ), Cube::parse( b ) ) == !both );
  }
}

TEST_CASE( "clique cover" )
{
  std::vector<Cube> loose = { Cube::parse( "1--" ), Cube::parse( "-1-" ), Cube::parse( "--1" ) };
  CHECK( clique_cover( loose ).size() == 3 );
  std::vector<Cube> three = { Cube::parse( "0-1" ), Cube::parse( "-0-" ), Cube::parse( "111" ) };
  auto cl = clique_cover( three );
  REQUIRE( cl.size() == 2 );
  CHECK( cl[0] == std::vector<std::size_t>{ 0, 2 } );
  CHECK( cl[1] == std::vector<std::size_t>{ 1 } );
  std::vector<Cube> five = { Cube::parse( "000" ), Cube::parse( "001" ), Cube::parse( "01-" ), Cube::parse( "10-" ),
                             Cube::parse( "11-" ) };
  CHECK( clique_cover( five ).size() == 1 );

  auto r = reorder_blif( parse_blif( single( "0-1 1\n-0- 1\n111 1\n", 3 ) ) );
  auto const& c = r.covers[0];
  REQUIRE( c.cubes.size() == 3 );
  CHECK( c.cubes[0].to_string() == "-0-" );
  CHECK( c.cubes[1].to_string() == "0-1" );
  CHECK( c.cubes[2].to_string() == "111" );
  CHECK( c.cliques == std::vector<std::size_t>{ 1, 2 } );
}

TEST_CASE( "reordering keeps every cover's function" )
{
  std::mt19937_64 rng( 17 );
  for ( int k = 0; k < 40; ++k )
  {
    std::vector<std::string> cubes;
    std::string body;
    for ( int c = 0; c < 10; ++c )
    {
      std::string s;
      for ( int i = 0; i < 10; ++i )
        s += "01--"[rng() % 4];
      cubes.push_back( s );
      body += s + " 1\n";
    }
    auto n = parse_blif( single( body, 10 ) );
    auto r = reorder_blif( n );
    for ( auto const& grp : r.covers[0].cliques )
      CHECK( grp >= 1 );
    std::size_t at = 0;
    for ( auto grp : r.covers[0].cliques )
    {
      for ( std::size_t i = at; i < at + grp; ++i )
        for ( std::size_t j = i + 1; j < at + grp; ++j )
          CHECK( mutually_exclusive( r.covers[0].cubes[i], r.covers[0].cubes[j] ) );
      at += grp;
    }
    CHECK( at == 10 );
    for ( std::uint64_t x = 0; x < 1024; ++x )
    {
      auto in = bits_of( x, 10 );
      auto want = cover_value( cubes, x );
      CHECK( evaluate_blif( n, in ).get( 0 ) == want );
      CHECK( evaluate_blif( r, in ).get( 0 ) == want );
    }
  }
}

TEST_CASE( "write and re-parse" )
{
  for ( auto const& p : samples() )
  {
    CAPTURE( p );
    auto n = reorder_blif( parse_blif( slurp( p ) ) );
    auto again = parse_blif( write_blif( n ) );
    CHECK( again.inputs == n.inputs );
    CHECK( again.outputs == n.outputs );
    REQUIRE( again.covers.size() == n.covers.size() );
    for ( std::size_t i = 0; i < n.covers.size(); ++i )
    {
      CHECK( again.covers[i].cubes == n.covers[i].cubes );
      CHECK( again.covers[i].cliques == n.covers[i].cliques );
    }
  }
}

TEST_CASE( "lowering examples" )
{
  auto andc = compile( lower_to_flat( parse_blif( single( "11 1\n", 2 ) ) ), { Strategy::eager, 0 } );
  CHECK( andc.stats.toffoli_count == 1 );

  auto or3 = parse_blif( single( "1-- 1\n-1- 1\n--1 1\n", 3 ) );
  CHECK( toffolis( reorder_blif( or3 ) ) > 0 );

  auto xor3 = reorder_blif( parse_blif( single( "100 1\n010 1\n001 1\n111 1\n", 3 ) ) );
  CHECK( xor3.covers[0].cliques.size() == 1 );
  auto c = compile( lower_to_flat( xor3 ), { Strategy::eager, 0 } );
  CHECK( verify( c.program, c.circuit, 4096, 1 ).ok() );
}

TEST_CASE( "sample netlists compile correctly and the XOR form never costs more" )
{
  for ( auto const& p : samples() )
  {
    CAPTURE( p );
    auto n = parse_blif( slurp( p ) );
    auto r = reorder_blif( n );
    for ( auto const* net : { &n, &r } )
      for ( auto s : { Strategy::bennett, Strategy::eager } )
      {
        auto flat = lower_to_flat( *net );
        auto c = compile( flat, { s, 0 } );
        auto rep = verify( c.circuit, [&]( BitVector const& x ) { return evaluate_blif( n, x ); }, 1u << 16, 5 );
        CHECK( rep.ok() );
      }
    CHECK( toffolis( r ) <= toffolis( n ) );
    bool clique = std::any_of( r.covers.begin(), r.covers.end(), []( Cover const& c ) {
      return std::any_of( c.cliques.begin(), c.cliques.end(), []( std::size_t g ) { return g >= 2; } );
    } );
    if ( clique )
      CHECK( toffolis( r ) < toffolis( n ) );
    CHECK( compile( lower_to_flat( r ), { Strategy::eager, 0 } ).stats.qubit_count <=
           compile( lower_to_flat( r ), { Strategy::bennett, 0 } ).stats.qubit_count );
  }
}
