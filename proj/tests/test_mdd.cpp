#include <doctest.h>

#include "oracles.hpp"

#include <revs/mdd.hpp>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace revs;

namespace
{

Mdd corpus_mdd( std::string const& name, ParamMap const& params = {} )
{
  std::ifstream in( std::string( REVS_CORPUS_DIR ) + "/" + name );
  std::ostringstream os;
  os << in.rdbuf();
  return build_mdd( compile_source( os.str(), params ) );
}

BitVector random_bits( std::mt19937_64& rng, std::size_t n )
{
  BitVector v( n );
  for ( std::size_t i = 0; i < n; ++i )
    v.set( i, rng() & 1u );
  return v;
}

// Structural invariants every built graph must satisfy.
void check_invariants( Mdd const& g )
{
  auto order = topo_order( g );
  REQUIRE( order.size() == g.size() );
  std::vector<std::size_t> pos( g.size() );
  for ( std::size_t i = 0; i < order.size(); ++i )
    pos[order[i]] = i;

  std::set<Loc> started;
  for ( auto const& n : g.nodes )
  {
    if ( n.pred == no_node )
    {
      CHECK( ( n.kind == NodeKind::input || n.kind == NodeKind::init ) );
      CHECK( started.insert( n.loc ).second );
    }
    else
    {
      CHECK( g[n.pred].succ == n.id );
      CHECK( g[n.pred].loc == n.loc );
      CHECK( pos[n.pred] < pos[n.id] );
    }
    if ( n.succ != no_node )
      CHECK( g[n.succ].pred == n.id );
    for ( auto d : n.deps )
    {
      CHECK( pos[d] < pos[n.id] );
      CHECK( g[d].loc != n.loc );
      auto const& back = g[d].dependents;
      CHECK( std::find( back.begin(), back.end(), n.id ) != back.end() );
    }
    if ( n.kind == NodeKind::output )
      CHECK( n.succ == no_node );
  }
  CHECK( started.size() == g.num_locs );

  // paths partition the nodes, one per location
  std::vector<int> seen( g.size(), 0 );
  for ( std::size_t p = 0; p < g.paths().size(); ++p )
    for ( auto n : g.paths()[p] )
    {
      ++seen[n];
      CHECK( g.path_of( n ) == p );
    }
  CHECK( std::all_of( seen.begin(), seen.end(), []( int c ) { return c == 1; } ) );
  CHECK( g.paths().size() == g.num_locs );
}

} // namespace

TEST_CASE( "single AND" )
{
  auto g = corpus_mdd( "and.rev" );
  CHECK( g.size() == 5 );
  CHECK( g.inputs.size() == 2 );
  REQUIRE( g.outputs.size() == 1 );
  auto out = g[g.outputs[0]];
  REQUIRE( out.pred != no_node );
  auto op = g[out.pred];
  CHECK( op.kind == NodeKind::op );
  CHECK( op.deps == std::vector<NodeId>{ g.inputs[0], g.inputs[1] } );
  CHECK( g[op.pred].kind == NodeKind::init );
  check_invariants( g );
}

TEST_CASE( "or/and example is all one-way" )
{
  auto g = corpus_mdd( "or_and.rev" );
  CHECK( g.size() == 11 );
  CHECK( all_one_way( g ) );
  for ( auto const& pp : classify_paths( g ) )
    CHECK( pp.relation == PathRelation::one_way );
  check_invariants( g );
}

TEST_CASE( "interdependent example" )
{
  auto g = corpus_mdd( "no_eager.rev" );
  CHECK_FALSE( all_one_way( g ) );
  auto pairs = classify_paths( g );
  CHECK( std::count_if( pairs.begin(), pairs.end(),
                        []( PathPair const& p ) { return p.relation == PathRelation::interdependent; } ) == 1 );
  check_invariants( g );
}

TEST_CASE( "modification path and its inputs" )
{
  auto g = corpus_mdd( "or_and.rev" );
  auto out = g.outputs[0];
  auto path = modification_path( g, out );
  REQUIRE( !path.empty() );
  CHECK( path.back() == out );
  for ( auto n : path )
    CHECK( g[n].loc == g[out].loc );
  auto ins = input_nodes( g, path );
  // the final OR reads the two intermediate ANDs
  CHECK( ins.size() == 2 );
  for ( auto n : ins )
    CHECK( g[n].kind == NodeKind::op );
}

TEST_CASE( "last dependent node follows topological order" )
{
  auto g = corpus_mdd( "arrays.rev" );
  auto order = topo_order( g );
  std::vector<std::size_t> pos( g.size() );
  for ( std::size_t i = 0; i < order.size(); ++i )
    pos[order[i]] = i;
  for ( auto const& n : g.nodes )
  {
    auto last = last_dependent_node( g, n.id, pos );
    for ( auto d : n.dependents )
      CHECK( pos[d] <= last );
  }
}

TEST_CASE( "corpus graphs satisfy the invariants and evaluate correctly" )
{
  std::mt19937_64 rng( 5 );
  std::vector<std::pair<std::string, ParamMap>> progs = {
      { "adder_ripple.rev", { { "n", 10 } } }, { "adder_select.rev", { { "n", 16 } } }, { "sha2.rev", { { "rounds", 2 } } },
      { "md5.rev", { { "rounds", 2 } } },      { "arrays.rev", {} } };
  for ( auto const& [name, params] : progs )
  {
    CAPTURE( name );
    std::ifstream in( std::string( REVS_CORPUS_DIR ) + "/" + name );
    std::ostringstream os;
    os << in.rdbuf();
    auto flat = compile_source( os.str(), params );
    auto g = build_mdd( flat );
    check_invariants( g );
    CHECK( g.unproven_cleans.empty() );
    for ( int i = 0; i < 50; ++i )
    {
      auto x = random_bits( rng, flat.num_input_bits() );
      CHECK( evaluate_mdd( g, x ) == interpret( flat, x ) );
    }
  }
}

TEST_CASE( "random programs: invariants and evaluation" )
{
  std::mt19937_64 rng( 31 );
  for ( int k = 0; k < 200; ++k )
  {
    auto gen = oracle::random_program( rng, 2 + rng() % 5, 3 + rng() % 15 );
    auto flat = compile_source( gen.text() );
    auto g = build_mdd( flat );
    check_invariants( g );
    for ( int i = 0; i < 16; ++i )
    {
      auto x = random_bits( rng, gen.inputs );
      CHECK( evaluate_mdd( g, x ) == gen.run( x ) );
    }
  }
}

TEST_CASE( "programs without in-place updates are one-way" )
{
  std::mt19937_64 rng( 77 );
  for ( int k = 0; k < 200; ++k )
  {
    auto gen = oracle::random_program( rng, 2 + rng() % 5, 3 + rng() % 15, 0.0 );
    CHECK( all_one_way( build_mdd( compile_source( gen.text() ) ) ) );
  }
}

TEST_CASE( "dot output names every node" )
{
  auto g = corpus_mdd( "or_and.rev" );
  std::ostringstream os;
  write_dot( os, g );
  auto s = os.str();
  CHECK( s.rfind( "digraph", 0 ) == 0 );
  CHECK( std::count( s.begin(), s.end(), '\n' ) >= static_cast<long>( g.size() ) );
}

TEST_CASE( "dependence through a third path makes a pair interdependent" )
{
  // u reads t directly; t is then updated from w, which reads u
  auto g = build_mdd( compile_source( "let a = false\nlet b = false\nlet c = false\nlet d = false\n"
                                      "let mutable t = a && b\nlet u = t && c\nlet w = u && d\nt <- t <> w\nt\n" ) );
  CHECK_FALSE( all_one_way( g ) );
  auto pairs = classify_paths( g );
  CHECK( std::any_of( pairs.begin(), pairs.end(), []( PathPair const& p ) { return p.relation == PathRelation::interdependent; } ) );
}
