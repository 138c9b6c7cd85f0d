#include <doctest.h>

#include "oracles.hpp"

#include <revs/frontend.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace revs;

namespace
{

std::string corpus( std::string const& name )
{
  std::ifstream in( std::string( REVS_CORPUS_DIR ) + "/" + name );
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

BitVector random_bits( std::mt19937_64& rng, std::size_t n )
{
  BitVector v( n );
  for ( std::size_t i = 0; i < n; ++i )
    v.set( i, rng() & 1u );
  return v;
}

std::size_t count( FlatProgram const& p, FlatKind k )
{
  return std::count_if( p.stmts.begin(), p.stmts.end(), [&]( auto const& s ) { return s.kind == k; } );
}

int error_line( std::string const& text )
{
  try
  {
    compile_source( text );
  }
  catch ( source_error const& e )
  {
    return e.line;
  }
  return -1;
}

} // namespace

TEST_CASE( "parse a one-line function" )
{
  auto p = parse( "let f a b = a && b" );
  REQUIRE( p.items.size() == 1 );
  CHECK( p.items[0].is_function() );
  CHECK( p.items[0].params == std::vector<std::string>{ "a", "b" } );
}

TEST_CASE( "empty program has no output" )
{
  CHECK_THROWS_AS( parse( "" ), source_error );
  CHECK_THROWS_AS( compile_source( "// nothing\n" ), source_error );
}

TEST_CASE( "parse the ripple adder" )
{
  auto p = parse( corpus( "adder_ripple.rev" ) );
  auto fn = std::find_if( p.items.begin(), p.items.end(), []( Stmt const& s ) { return s.is_function(); } );
  REQUIRE( fn != p.items.end() );
  CHECK( std::count_if( p.items.begin(), p.items.end(), []( Stmt const& s ) { return s.is_function(); } ) == 1 );
  CHECK( std::count_if( fn->body.begin(), fn->body.end(), []( Stmt const& s ) { return s.tag == StmtTag::for_; } ) == 1 );
  CHECK( std::any_of( fn->body.begin(), fn->body.end(),
                      []( Stmt const& s ) { return s.tag == StmtTag::let && s.is_mutable && s.name == "carry"; } ) );
}

TEST_CASE( "diagnostics carry positions" )
{
  CHECK( error_line( "let a = false\nlet b = a &&\n" ) >= 2 );
  CHECK( error_line( "let a = false\nb\n" ) == 2 );
  CHECK( error_line( "let a = false\na <- true\na\n" ) == 2 );
  CHECK( error_line( "let a = Array.zeroCreate 2\nlet x = false\nfor i in 0 .. x do\n  a.[i] <- true\na\n" ) == 3 );
  CHECK( error_line( "let a = Array.zeroCreate 2\na.[2]\n" ) == 2 );
  CHECK_THROWS_AS( compile_source( "let f x = f x\nlet a = false\nf a\n" ), source_error );
}

TEST_CASE( "loops unroll into one statement per iteration" )
{
  auto p = compile_source( "let a = Array.zeroCreate 2\nlet b = Array.zeroCreate 2\nlet c = Array.zeroCreate 2\n"
                           "for i in 0 .. 1 do\n  c.[i] <- a.[i] <> b.[i]\nc\n" );
  CHECK( p.stmts.size() == 2 );
  CHECK( count( p, FlatKind::assign ) == 2 );
}

TEST_CASE( "arrays with an in-place update" )
{
  auto p = compile_source( corpus( "arrays.rev" ) );
  CHECK( count( p, FlatKind::assign ) == 8 );
  CHECK( count( p, FlatKind::update ) == 0 );
  CHECK( p.num_input_bits() == 12 );
  CHECK( p.outputs.size() == 4 );
}

TEST_CASE( "rotation and slicing are relabelings" )
{
  auto p = compile_source( "let a = Array.zeroCreate 4\nrot 2 a\n" );
  CHECK( p.stmts.empty() );
  REQUIRE( p.outputs.size() == 4 );
  for ( std::size_t i = 0; i < 4; ++i )
    CHECK( p.outputs[i].loc == p.inputs[0].locs[( i + 2 ) % 4] );
  auto q = compile_source( "let a = Array.zeroCreate 6\nArray.append a.[3 .. 5] a.[0 .. 1]\n" );
  CHECK( q.stmts.empty() );
  CHECK( q.outputs.size() == 5 );
}

TEST_CASE( "interpret examples" )
{
  auto f = compile_source( "let f a b = a && b" );
  CHECK( interpret( f, BitVector::from_string( "11" ) ).get( 0 ) );
  CHECK_FALSE( interpret( f, BitVector::from_string( "10" ) ).get( 0 ) );
  auto h = compile_source( "let h a b c d = (a || b) <> (c && d)" );
  CHECK_FALSE( interpret( h, BitVector::from_string( "0111" ) ).get( 0 ) );
  auto adder = compile_source( corpus( "adder_ripple.rev" ), { { "n", 4 } } );
  auto out = interpret( adder, oracle::pack( { { 3, 4 }, { 5, 4 } } ) );
  CHECK( oracle::word( out, 0, 4 ) == 8 );
}

TEST_CASE( "clean checks for zero at run time" )
{
  auto p = compile_source( "let a = false\nlet mutable t = a\nclean t\na\n" );
  CHECK_NOTHROW( interpret( p, BitVector::from_string( "0" ) ) );
  CHECK_THROWS_AS( interpret( p, BitVector::from_string( "1" ) ), source_error );
}

TEST_CASE( "parameters override top-level integers" )
{
  auto text = corpus( "adder_ripple.rev" );
  CHECK( compile_source( text ).num_input_bits() == 20 );
  CHECK( compile_source( text, { { "n", 7 } } ).num_input_bits() == 14 );
  CHECK_THROWS_AS( compile_source( text, { { "m", 7 } } ), source_error );
}

TEST_CASE( "flattened and direct interpretation agree on the corpus" )
{
  std::mt19937_64 rng( 2024 );
  std::vector<std::pair<std::string, ParamMap>> progs = {
      { "adder_ripple.rev", { { "n", 8 } } }, { "adder_select.rev", { { "n", 10 } } }, { "sha2.rev", { { "rounds", 2 } } },
      { "md5.rev", { { "rounds", 2 } } },     { "arrays.rev", {} },                    { "or_and.rev", {} },
      { "no_eager.rev", {} },                 { "and.rev", {} } };
  for ( auto const& [name, params] : progs )
  {
    CAPTURE( name );
    auto src = parse( corpus( name ) );
    auto flat = flatten( src, params );
    for ( int i = 0; i < 200; ++i )
    {
      auto in = random_bits( rng, flat.num_input_bits() );
      CHECK( interpret( flat, in ) == evaluate_source( src, in, params ) );
    }
  }
}

TEST_CASE( "flatten is idempotent" )
{
  for ( auto name : { "adder_ripple.rev", "adder_select.rev", "arrays.rev", "or_and.rev", "no_eager.rev", "sha2.rev" } )
  {
    CAPTURE( name );
    auto p = compile_source( corpus( name ) );
    auto q = compile_source( to_source( p ) );
    CHECK( structurally_equal( p, q ) );
  }
}

TEST_CASE( "interpret matches the generator's evaluator on random programs" )
{
  std::mt19937_64 rng( 99 );
  for ( int k = 0; k < 100; ++k )
  {
    auto g = oracle::random_program( rng, 2 + rng() % 5, 3 + rng() % 12 );
    auto text = g.text();
    CAPTURE( text );
    auto p = compile_source( text );
    for ( int i = 0; i < 20; ++i )
    {
      auto in = random_bits( rng, g.inputs );
      CHECK( interpret( p, in ) == g.run( in ) );
    }
  }
}

TEST_CASE( "SHA-2 and MD5 ports compute the reference rounds" )
{
  std::mt19937_64 rng( 7 );
  for ( int r : { 1, 3 } )
  {
    auto sha = compile_source( corpus( "sha2.rev" ), { { "rounds", r } } );
    auto md5 = compile_source( corpus( "md5.rev" ), { { "rounds", r } } );
    for ( int i = 0; i < 20; ++i )
    {
      auto in = random_bits( rng, sha.num_input_bits() );
      CHECK( interpret( sha, in ) == oracle::sha256_rounds( in, r ) );
      auto m = random_bits( rng, md5.num_input_bits() );
      CHECK( interpret( md5, m ) == oracle::md5_rounds( m, r ) );
    }
  }
  auto md5_all = compile_source( corpus( "md5.rev" ), { { "rounds", 64 } } );
  for ( int i = 0; i < 5; ++i )
  {
    auto m = random_bits( rng, md5_all.num_input_bits() );
    CHECK( interpret( md5_all, m ) == oracle::md5_rounds( m, 64 ) );
  }
}

TEST_CASE( "both adders add" )
{
  std::mt19937_64 rng( 13 );
  for ( long long n : { 4, 7, 10, 16, 23 } )
    for ( auto name : { "adder_ripple.rev", "adder_select.rev" } )
    {
      CAPTURE( name );
      CAPTURE( n );
      auto p = compile_source( corpus( name ), { { "n", n } } );
      for ( int i = 0; i < 50; ++i )
      {
        auto in = random_bits( rng, 2 * n );
        CHECK( interpret( p, in ) == oracle::adder( in, n ) );
      }
    }
}
