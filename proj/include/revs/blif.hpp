#pragma once

#include <revs/circuit.hpp>
#include <revs/frontend.hpp>
#include <revs/mdd.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace revs
{

enum class Literal : std::uint8_t
{
  zero,
  one,
  dont_care
};

struct Cube
{
  std::vector<Literal> lits;

  /// From a column string over `0`, `1`, `-`.
  static Cube parse( std::string const& s );
  std::string to_string() const;
  bool operator==( Cube const& ) const = default;
};

/// One `.names` block; on-set cubes only.
struct Cover
{
  std::vector<std::string> inputs;
  std::string output;
  std::vector<Cube> cubes;
  /// Sizes of consecutive groups of pairwise exclusive cubes; empty means one group per cube.
  std::vector<std::size_t> cliques;
};

struct BlifNetlist
{
  std::string model;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  /// In dependency order: a cover only reads inputs and earlier covers.
  std::vector<Cover> covers;
};

class blif_error : public std::runtime_error
{
public:
  blif_error( std::string const& msg, std::size_t line = 0 )
      : std::runtime_error( line ? "line " + std::to_string( line ) + ": " + msg : msg ) {}
};

/// Combinational subset; `.latch`, `.clock`, `.subckt` are rejected.
BlifNetlist parse_blif( std::string const& text );

/// Round-trips through parse_blif; clique groups are kept as `#.cliques` lines.
std::string write_blif( BlifNetlist const& n );

/// Some column requires 0 in one cube and 1 in the other.
bool mutually_exclusive( Cube const& a, Cube const& b );

/// Greedy: each cube joins the first group it excludes entirely, else starts one.
std::vector<std::vector<std::size_t>> clique_cover( std::vector<Cube> const& cubes );

/// Cubes of every cover regrouped by clique_cover, smaller groups first.
BlifNetlist reorder_blif( BlifNetlist const& n );

/// Cover semantics, primary inputs in declaration order.
BitVector evaluate_blif( BlifNetlist const& n, BitVector const& inputs );

/*! \brief Straight-line program for `n`.
 *
 * Each cube is an AND of literals; cubes of one group are XORed; groups are
 * ORed as not(and(not g1, ..., not gk)).  Every cover and every compound
 * group gets its own location.
 */
FlatProgram lower_to_flat( BlifNetlist const& n );

Mdd lower( BlifNetlist const& n );

} // namespace revs
