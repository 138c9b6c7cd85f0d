#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace revs
{

/*! Reversible pebble game on the line 0 -> 1 -> ... -> T.  Node 0 is always
 *  available; placing or removing a pebble on node i needs a pebble on i-1
 *  (or i = 1).  A game is won when only node T holds a pebble.
 */

enum class PebbleAction : std::uint8_t
{
  place,
  remove
};

struct Move
{
  std::size_t node;
  PebbleAction action;

  bool operator==( Move const& ) const = default;
};

using MoveList = std::vector<Move>;

class pebble_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct PebbleReport
{
  bool ok = true;
  std::size_t peak = 0;
  std::size_t steps = 0;
  std::size_t placements = 0;
  std::string violation;
  /// Index of the offending move; `steps` for a bad final state.
  std::size_t violation_at = 0;
};

/// Replays `moves`, checking legality, the budget `k`, and the final state.
PebbleReport validate( MoveList const& moves, std::size_t T, std::size_t k );

/// Place 1..T, remove T-1..1.
MoveList bennett_strategy( std::size_t T );

/*! \brief Fill-and-collapse heuristic.
 *
 * Segments of length k, k-1, ... are pebbled one after another; each is
 * cleared except its last node before the next starts.  The checkpoints
 * left behind are removed last to first by re-pebbling their segments.
 * Throws pebble_error if T > k(k+1)/2.
 */
MoveList incremental_strategy( std::size_t T, std::size_t k );

/// Fewest pebbles that can win on a line of T nodes: ceil(log2 T) + 1.
std::size_t lmt_pebbles( std::size_t T );

/*! \brief Logarithmic-space recursion.
 *
 * Reach a split node, recurse from it with one pebble fewer, then unreach
 * the split node; uses lmt_pebbles(T) pebbles.  Split points are chosen to
 * minimise moves under that budget.
 */
MoveList lmt_strategy( std::size_t T );

/// Same recursion with the split fixed at ceil(n/2); 3^ceil(log2 T) moves for powers of two.
MoveList lmt_halving_strategy( std::size_t T );

struct OptimalPebbling
{
  std::size_t min_steps = 0;
  MoveList moves;
};

/*! \brief Fewest moves to win with at most k pebbles.
 *
 * Dynamic program over (distance, pebbles): reach some node m with k
 * pebbles, reach the end from m with k-1, then remove m with k-1.
 * Throws pebble_error if the game cannot be won (T > 2^(k-1)).
 */
OptimalPebbling knill_optimal( std::size_t T, std::size_t k );

/// knill_optimal(T, k).min_steps without building moves; 0 if infeasible.
std::size_t knill_min_steps( std::size_t T, std::size_t k );

struct TradeoffRow
{
  std::size_t k;
  std::size_t T;
  std::size_t min_steps; ///< 0 if infeasible
};

/// One row per (k, T) with T in 1..T_max.
std::vector<TradeoffRow> tradeoff_table( std::size_t T_max, std::vector<std::size_t> const& ks );

void write_tradeoff_csv( std::ostream& os, std::vector<TradeoffRow> const& rows );

std::string to_string( MoveList const& moves );

} // namespace revs
