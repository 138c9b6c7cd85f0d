#include <revs/pebble.hpp>

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

namespace revs
{

PebbleReport validate( MoveList const& moves, std::size_t T, std::size_t k )
{
  PebbleReport r;
  std::vector<char> on( T + 1, 0 );
  std::size_t count = 0;
  auto fail = [&]( std::size_t at, std::string why ) {
    r.ok = false;
    r.violation = std::move( why );
    r.violation_at = at;
    return r;
  };
  for ( std::size_t i = 0; i < moves.size(); ++i )
  {
    auto [node, action] = moves[i];
    if ( node < 1 || node > T )
      return fail( i, "node " + std::to_string( node ) + " outside 1.." + std::to_string( T ) );
    if ( node > 1 && !on[node - 1] )
      return fail( i, "node " + std::to_string( node - 1 ) + " is not pebbled" );
    if ( action == PebbleAction::place )
    {
      if ( on[node] )
        return fail( i, "node " + std::to_string( node ) + " is already pebbled" );
      on[node] = 1;
      ++r.placements;
      if ( ++count > k )
        return fail( i, "more than " + std::to_string( k ) + " pebbles" );
      r.peak = std::max( r.peak, count );
    }
    else
    {
      if ( !on[node] )
        return fail( i, "node " + std::to_string( node ) + " has no pebble to remove" );
      on[node] = 0;
      --count;
    }
    ++r.steps;
  }
  if ( T == 0 || !on[T] || count != 1 )
    return fail( moves.size(), "final state is not a single pebble on node " + std::to_string( T ) );
  return r;
}

MoveList bennett_strategy( std::size_t T )
{
  MoveList m;
  for ( std::size_t i = 1; i <= T; ++i )
    m.push_back( { i, PebbleAction::place } );
  for ( std::size_t i = T; i-- > 1; )
    m.push_back( { i, PebbleAction::remove } );
  return m;
}

namespace
{

void append_reversed( MoveList& out, MoveList const& moves )
{
  for ( auto it = moves.rbegin(); it != moves.rend(); ++it )
    out.push_back( { it->node, it->action == PebbleAction::place ? PebbleAction::remove : PebbleAction::place } );
}

/// Pebbles base+1..base+len in order, then clears all but base+len.
void sweep( MoveList& m, std::size_t base, std::size_t len )
{
  for ( std::size_t i = 1; i <= len; ++i )
    m.push_back( { base + i, PebbleAction::place } );
  for ( std::size_t i = len; i-- > 1; )
    m.push_back( { base + i, PebbleAction::remove } );
}

} // namespace

MoveList incremental_strategy( std::size_t T, std::size_t k )
{
  if ( T == 0 || k == 0 || T > k * ( k + 1 ) / 2 )
    throw pebble_error( "incremental strategy with " + std::to_string( k ) + " pebbles reaches at most " +
                        std::to_string( k * ( k + 1 ) / 2 ) + " nodes" );
  MoveList m;
  std::vector<std::size_t> checkpoints{ 0 };
  for ( std::size_t len = k; checkpoints.back() < T; --len )
  {
    auto base = checkpoints.back();
    auto step = std::min( len, T - base );
    sweep( m, base, step );
    checkpoints.push_back( base + step );
  }
  // checkpoints = 0, c1, ..., T; remove c_{last-1} .. c1.
  for ( auto j = checkpoints.size() - 2; j >= 1; --j )
  {
    auto lo = checkpoints[j - 1], c = checkpoints[j];
    for ( auto i = lo + 1; i < c; ++i )
      m.push_back( { i, PebbleAction::place } );
    m.push_back( { c, PebbleAction::remove } );
    for ( auto i = c; i-- > lo + 1; )
      m.push_back( { i, PebbleAction::remove } );
  }
  return m;
}

namespace
{

MoveList lmt_moves( std::size_t base, std::size_t n )
{
  if ( n == 1 )
    return { { base + 1, PebbleAction::place } };
  auto h = ( n + 1 ) / 2;
  auto first = lmt_moves( base, h );
  auto m = first;
  auto rest = lmt_moves( base + h, n - h );
  m.insert( m.end(), rest.begin(), rest.end() );
  append_reversed( m, first );
  return m;
}

constexpr std::size_t infeasible = std::numeric_limits<std::size_t>::max();

/// F[j][n]: fewest moves to reach distance n with j pebbles; arg[j][n]: best first stop.
struct KnillTable
{
  std::vector<std::vector<std::size_t>> F, arg;

  KnillTable( std::size_t T, std::size_t k ) : F( k + 1, std::vector<std::size_t>( T + 1, infeasible ) ), arg( F )
  {
    for ( std::size_t j = 1; j <= k; ++j )
    {
      F[j][1] = 1;
      for ( std::size_t n = 2; n <= T; ++n )
        for ( std::size_t m = 1; m < n; ++m )
        {
          auto a = F[j][m], b = F[j - 1][n - m], c = F[j - 1][m];
          if ( a == infeasible || b == infeasible || c == infeasible )
            continue;
          if ( a + b + c < F[j][n] )
          {
            F[j][n] = a + b + c;
            arg[j][n] = m;
          }
        }
    }
  }

  void moves( MoveList& out, std::size_t base, std::size_t n, std::size_t j ) const
  {
    if ( n == 1 )
    {
      out.push_back( { base + 1, PebbleAction::place } );
      return;
    }
    auto m = arg[j][n];
    MoveList first, undo;
    moves( first, base, m, j );
    out.insert( out.end(), first.begin(), first.end() );
    moves( out, base + m, n - m, j - 1 );
    moves( undo, base, m, j - 1 );
    append_reversed( out, undo );
  }
};

} // namespace

MoveList lmt_halving_strategy( std::size_t T )
{
  if ( T == 0 )
    return {};
  return lmt_moves( 0, T );
}

std::size_t lmt_pebbles( std::size_t T )
{
  std::size_t k = 1;
  while ( ( std::size_t{ 1 } << ( k - 1 ) ) < T )
    ++k;
  return k;
}

MoveList lmt_strategy( std::size_t T )
{
  if ( T == 0 )
    return {};
  return knill_optimal( T, lmt_pebbles( T ) ).moves;
}

std::size_t knill_min_steps( std::size_t T, std::size_t k )
{
  if ( T == 0 || k == 0 )
    return 0;
  k = std::min( k, T );
  KnillTable t( T, k );
  return t.F[k][T] == infeasible ? 0 : t.F[k][T];
}

OptimalPebbling knill_optimal( std::size_t T, std::size_t k )
{
  auto kk = std::min( k, T );
  if ( T == 0 || k == 0 )
    throw pebble_error( "empty game" );
  KnillTable t( T, kk );
  if ( t.F[kk][T] == infeasible )
    throw pebble_error( std::to_string( k ) + " pebbles cannot reach node " + std::to_string( T ) );
  OptimalPebbling r;
  r.min_steps = t.F[kk][T];
  t.moves( r.moves, 0, T, kk );
  return r;
}

std::vector<TradeoffRow> tradeoff_table( std::size_t T_max, std::vector<std::size_t> const& ks )
{
  std::vector<TradeoffRow> rows;
  for ( auto k : ks )
  {
    if ( k == 0 || T_max == 0 )
      continue;
    auto kk = std::min( k, T_max );
    KnillTable t( T_max, kk );
    for ( std::size_t T = 1; T <= T_max; ++T )
    {
      auto j = std::min( kk, T );
      auto v = t.F[j][T];
      rows.push_back( { k, T, v == infeasible ? 0 : v } );
    }
  }
  return rows;
}

void write_tradeoff_csv( std::ostream& os, std::vector<TradeoffRow> const& rows )
{
  os << "k,T,min_steps\n";
  for ( auto const& r : rows )
  {
    os << r.k << ',' << r.T << ',';
    if ( r.min_steps )
      os << r.min_steps;
    os << '\n';
  }
}

std::string to_string( MoveList const& moves )
{
  std::ostringstream os;
  for ( std::size_t i = 0; i < moves.size(); ++i )
    os << ( i ? " " : "" ) << ( moves[i].action == PebbleAction::place ? '+' : '-' ) << moves[i].node;
  return os.str();
}

} // namespace revs
