#include <doctest.h>

#include "oracles.hpp"

#include <revs/compiler.hpp>
#include <revs/verify.hpp>

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

// Runs the circuit on `in` (zero ancillas) and reads the output wires.
BitVector run( Circuit const& c, BitVector const& in )
{
  BitVector full( c.width );
  for ( std::size_t i = 0; i < in.size(); ++i )
    full.set( i, in.get( i ) );
  auto r = simulate( c, full );
  BitVector out( c.outputs.size() );
  for ( std::size_t i = 0; i < c.outputs.size(); ++i )
    out.set( i, r.get( c.outputs[i] ) );
  return out;
}

std::string chain( int ops )
{
  std::string s = "let a = Array.zeroCreate 4\nlet t0 = a.[0] && a.[1]\n";
  for ( int i = 1; i < ops; ++i )
  {
    auto op = i % 2 ? " && " : " <> ";
    auto arg = ( i / 2 ) % 2 ? "a.[0]" : "a.[2]";
    s += "let t" + std::to_string( i ) + " = t" + std::to_string( i - 1 ) + op + arg + "\n";
  }
  return s + "t" + std::to_string( ops - 1 ) + "\n";
}

Compilation build( std::string const& text, Strategy s, ParamMap const& params = {}, std::size_t budget = 0 )
{
  return compile_text( text, params, { s, budget } );
}

std::size_t eager_width( std::string const& text, ParamMap const& params = {} )
{
  return build( text, Strategy::eager, params ).stats.qubit_count;
}

} // namespace

TEST_CASE( "single AND under each strategy" )
{
  auto text = corpus( "and.rev" );
  auto e = build( text, Strategy::eager );
  CHECK( e.circuit.width == 3 );
  CHECK( e.circuit.gates == std::vector<Gate>{ Gate::toffoli( 0, 1, 2 ) } );
  auto b = build( text, Strategy::bennett );
  CHECK( b.stats.toffoli_count == 2 );
  CHECK( b.stats.cnot_count == 1 );
  auto i = build( text, Strategy::incremental, {}, 3 );
  CHECK( i.circuit == e.circuit );
}

TEST_CASE( "or/and example frees both ancillas" )
{
  auto c = build( corpus( "or_and.rev" ), Strategy::eager );
  CHECK( c.plan.unclean == 0 );
  CHECK_FALSE( c.plan.copy_and_reverse );
  CHECK( c.stats.qubit_count == 7 );
  CHECK( verify( c.program, c.circuit, 4096, 1 ).ok() );
}

TEST_CASE( "interdependent example falls back to copy and reverse" )
{
  auto c = build( corpus( "no_eager.rev" ), Strategy::eager );
  CHECK( c.plan.unclean == 1 );
  CHECK( c.plan.copy_and_reverse );
  // dispositions are per node: the init and the AND of the one path
  std::size_t unclean_inits = 0;
  for ( auto const& n : c.mdd.nodes )
    unclean_inits += n.kind == NodeKind::init && c.plan.disposition[n.id] == Disposition::unclean;
  CHECK( unclean_inits == 1 );
  auto r = verify( c.program, c.circuit, 4096, 1 );
  CHECK( r.exhaustive );
  CHECK( r.ok() );
}

TEST_CASE( "ripple adder matches the reference numbers" )
{
  auto text = corpus( "adder_ripple.rev" );
  auto b = build( text, Strategy::bennett, { { "n", 10 } } );
  CHECK( b.stats.toffoli_count == 34 );
  CHECK( b.stats.qubit_count == 49 );
  auto e = build( text, Strategy::eager, { { "n", 10 } } );
  CHECK( e.stats.toffoli_count == 34 );
  CHECK( e.stats.qubit_count == 40 );
  auto in = oracle::pack( { { 3, 4 }, { 5, 4 } } );
  for ( auto s : { Strategy::bennett, Strategy::eager } )
  {
    auto c = build( text, s, { { "n", 4 } } );
    CHECK( oracle::word( run( c.circuit, in ), 0, 4 ) == 8 );
  }
}

TEST_CASE( "SHA-2 round numbers" )
{
  auto text = corpus( "sha2.rev" );
  auto e = build( text, Strategy::eager, { { "rounds", 1 } } );
  CHECK( e.stats.toffoli_count == 690 );
  auto b = build( text, Strategy::bennett, { { "rounds", 1 } } );
  CHECK( b.stats.toffoli_count == 1124 );
  // one extra qubit: our Bennett keeps a separate copy-out register
  CHECK( b.stats.qubit_count == 705 );
}

TEST_CASE( "corpus circuits compute the reference functions" )
{
  std::mt19937_64 rng( 11 );
  struct Case
  {
    std::string file;
    ParamMap params;
    std::function<BitVector( BitVector const& )> ref;
  };
  std::vector<Case> cases = {
      { "adder_ripple.rev", { { "n", 10 } }, []( BitVector const& x ) { return oracle::adder( x, 10 ); } },
      { "adder_select.rev", { { "n", 16 } }, []( BitVector const& x ) { return oracle::adder( x, 16 ); } },
      { "sha2.rev", { { "rounds", 2 } }, []( BitVector const& x ) { return oracle::sha256_rounds( x, 2 ); } },
      { "md5.rev", { { "rounds", 2 } }, []( BitVector const& x ) { return oracle::md5_rounds( x, 2 ); } } };
  for ( auto const& c : cases )
    for ( auto s : { Strategy::bennett, Strategy::eager, Strategy::incremental } )
    {
      CAPTURE( c.file );
      CAPTURE( to_string( s ) );
      auto text = corpus( c.file );
      auto comp = build( text, s, c.params, s == Strategy::incremental ? eager_width( text, c.params ) : 0 );
      for ( int i = 0; i < 20; ++i )
      {
        auto x = random_bits( rng, comp.circuit.num_inputs );
        CHECK( run( comp.circuit, x ) == c.ref( x ) );
      }
      CHECK( verify( comp.program, comp.circuit, 64, 3 ).ok() );
    }
}

TEST_CASE( "eager never needs more qubits than Bennett on the corpus" )
{
  for ( auto [file, params] : std::vector<std::pair<std::string, ParamMap>>{ { "adder_ripple.rev", { { "n", 20 } } },
                                                                              { "adder_select.rev", { { "n", 16 } } },
                                                                              { "sha2.rev", { { "rounds", 2 } } },
                                                                              { "md5.rev", { { "rounds", 1 } } },
                                                                              { "arrays.rev", {} },
                                                                              { "or_and.rev", {} },
                                                                              { "no_eager.rev", {} } } )
  {
    CAPTURE( file );
    auto text = corpus( file );
    CHECK( build( text, Strategy::eager, params ).stats.qubit_count <=
           build( text, Strategy::bennett, params ).stats.qubit_count );
  }
}

TEST_CASE( "random programs compile correctly under every strategy" )
{
  std::mt19937_64 rng( 123 );
  for ( int k = 0; k < 150; ++k )
  {
    auto gen = oracle::random_program( rng, 2 + rng() % 5, 3 + rng() % 15 );
    auto text = gen.text();
    CAPTURE( text );
    auto w = eager_width( text );
    for ( auto s : { Strategy::bennett, Strategy::eager, Strategy::incremental } )
    {
      auto c = build( text, s, {}, w );
      CHECK( verify( c.program, c.circuit, 4096, 1 ).ok() );
      if ( s == Strategy::incremental )
        CHECK( c.stats.qubit_count <= w );
    }
  }
}

TEST_CASE( "one-way programs are cleaned eagerly without fallback" )
{
  std::mt19937_64 rng( 4242 );
  for ( int k = 0; k < 200; ++k )
  {
    auto gen = oracle::random_program( rng, 2 + rng() % 5, 3 + rng() % 15 );
    auto flat = compile_source( gen.text() );
    auto g = build_mdd( flat );
    if ( !all_one_way( g ) )
      continue;
    auto plan = eager_cleanup( g );
    CHECK( plan.unclean == 0 );
  }
}

TEST_CASE( "incremental cleanup respects the budget and reports the minimum" )
{
  auto text = chain( 24 );
  auto e = build( text, Strategy::eager );
  auto big = build( text, Strategy::incremental, {}, e.stats.qubit_count );
  CHECK( big.plan.checkpoints == 0 );

  std::size_t minimal = 0;
  try
  {
    build( text, Strategy::incremental, {}, 6 );
    FAIL( "budget 6 should be infeasible" );
  }
  catch ( budget_error const& err )
  {
    minimal = err.minimal;
  }
  REQUIRE( minimal > 6 );
  CHECK_THROWS_AS( build( text, Strategy::incremental, {}, minimal - 1 ), budget_error );
  auto tight = build( text, Strategy::incremental, {}, minimal );
  CHECK( tight.plan.checkpoints >= 1 );
  CHECK( tight.stats.qubit_count <= minimal );
  CHECK( verify( tight.program, tight.circuit, 4096, 1 ).ok() );

  for ( std::size_t b = minimal; b <= e.stats.qubit_count; ++b )
  {
    CAPTURE( b );
    auto c = build( text, Strategy::incremental, {}, b );
    CHECK( c.stats.qubit_count <= b );
    CHECK( verify( c.program, c.circuit, 4096, 1 ).ok() );
  }
}

TEST_CASE( "SHA-2 three rounds under the one-round eager width" )
{
  auto text = corpus( "sha2.rev" );
  auto w = eager_width( text, { { "rounds", 1 } } );
  auto c = build( text, Strategy::incremental, { { "rounds", 3 } }, w );
  CHECK( c.stats.qubit_count <= w );
  CHECK( verify( c.program, c.circuit, 32, 9 ).ok() );
}

TEST_CASE( "emission is deterministic" )
{
  auto text = corpus( "adder_select.rev" );
  std::ostringstream a, b;
  write_circuit( a, build( text, Strategy::eager ).circuit );
  write_circuit( b, build( text, Strategy::eager ).circuit );
  CHECK( a.str() == b.str() );
}

TEST_CASE( "report carries the counters" )
{
  auto c = build( corpus( "or_and.rev" ), Strategy::eager );
  auto j = report_json( c );
  CHECK( j["toffoli"] == c.stats.toffoli_count );
  CHECK( j["qubits"] == c.stats.qubit_count );
  CHECK( j["strategy"] == "eager" );
  CHECK_FALSE( j.contains( "seconds" ) );
  CHECK( report_json( c, true ).contains( "seconds" ) );
}
