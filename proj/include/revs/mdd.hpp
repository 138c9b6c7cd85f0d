#pragma once

#include <revs/frontend.hpp>
#include <revs/symbolic.hpp>

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace revs
{

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = std::numeric_limits<NodeId>::max();

enum class NodeKind : std::uint8_t
{
  input,
  init,
  op,
  clean,
  output
};

char const* to_string( NodeKind k );

/*! \brief One version of one location.
 *
 * Nodes on the same location are chained by mutation edges (`pred`/`succ`).
 * An op node computes `expr` onto the location; the variables of `expr`
 * are the node ids whose values it reads (dependency edges).
 */
struct MddNode
{
  NodeId id = 0;
  NodeKind kind = NodeKind::init;
  Loc loc = 0;
  BoolExp expr;
  NodeId pred = no_node;
  NodeId succ = no_node;
  std::vector<NodeId> deps;
  std::vector<NodeId> dependents;
  ValueId value = 0;
  /// Position among the outputs, for output nodes.
  std::size_t output_index = 0;
};

enum class PathRelation : std::uint8_t
{
  one_way,
  interdependent
};

struct PathPair
{
  std::size_t first;
  std::size_t second;
  PathRelation relation;
};

struct Mdd
{
  std::vector<MddNode> nodes;
  /// Input node of each input bit, in register order.
  std::vector<NodeId> inputs;
  /// Output node of each result bit.
  std::vector<NodeId> outputs;
  std::uint32_t num_locs = 0;
  std::vector<std::string> loc_names;
  ValueTable values;
  /// Clean nodes whose location is not provably zero.
  std::vector<NodeId> unproven_cleans;

  MddNode const& operator[]( NodeId n ) const { return nodes[n]; }
  std::size_t size() const { return nodes.size(); }

  /// Maximal mutation chains, each listed head first; cached on first use.
  std::vector<std::vector<NodeId>> const& paths() const;
  /// Index into paths() of the chain containing `n`.
  std::size_t path_of( NodeId n ) const;

private:
  mutable std::vector<std::vector<NodeId>> paths_;
  mutable std::vector<std::size_t> path_index_;
};

class mdd_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

Mdd build_mdd( FlatProgram const& p );

/// Kahn's algorithm, ties broken by ascending node id.
std::vector<NodeId> topo_order( Mdd const& g );

/// Largest topological index among nodes reading `v`, or the index of `v` itself.
std::size_t last_dependent_node( Mdd const& g, NodeId v, std::vector<std::size_t> const& topo_index );
std::size_t last_dependent_node( Mdd const& g, NodeId v );

/// Mutation chain from the head of `v`'s path up to and including `v`.
std::vector<NodeId> modification_path( Mdd const& g, NodeId v );

/// Nodes outside `path` that some node of `path` reads, ascending.
std::vector<NodeId> input_nodes( Mdd const& g, std::vector<NodeId> const& path );

/// Pairs of paths joined by at least one dependency edge; all other pairs are one-way.
std::vector<PathPair> classify_paths( Mdd const& g );
bool all_one_way( Mdd const& g );

/// Classical evaluation of every node in topological order.
BitVector evaluate_mdd( Mdd const& g, BitVector const& inputs );

void write_dot( std::ostream& os, Mdd const& g );

} // namespace revs
