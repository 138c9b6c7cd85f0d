#pragma once

#include <revs/mdd.hpp>

#include <string>
#include <vector>

namespace revs
{

enum class Strategy : std::uint8_t
{
  bennett,
  eager,
  incremental
};

char const* to_string( Strategy s );
/// Accepts `bennett`, `eager`, `incremental`.
Strategy parse_strategy( std::string const& name );

enum class StepKind : std::uint8_t
{
  compute,     ///< init: take a wire; op: apply; clean: release the wire
  uncompute,   ///< inverse of compute
  copy_out,    ///< CNOT every output onto a fresh wire
  reverse_all, ///< undo everything before the copy-out
  checkpoint,  ///< CNOT `versions` onto fresh wires
  rebind       ///< the checkpoint copies become the wires of their locations
};

struct Step
{
  StepKind kind;
  NodeId node = no_node;
  std::vector<NodeId> versions = {};

  static Step compute( NodeId n ) { return { StepKind::compute, n, {} }; }
  static Step uncompute( NodeId n ) { return { StepKind::uncompute, n, {} }; }
  bool operator==( Step const& ) const = default;
};

enum class Disposition : std::uint8_t
{
  kept,            ///< input, output, or never computed
  cleaned_eagerly,
  checkpointed,    ///< computed in a reversed segment, finally cleaned by copy-and-reverse
  bennett_cleaned,
  unclean          ///< eager cleanup impossible; copy-and-reverse fallback
};

char const* to_string( Disposition d );

struct Plan
{
  Strategy strategy = Strategy::bennett;
  std::vector<Step> steps;
  /// Indexed by node id.
  std::vector<Disposition> disposition;
  std::size_t checkpoints = 0;
  std::size_t unclean = 0;
  bool copy_and_reverse = false;
  std::size_t qubit_budget = 0;
};

class plan_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class budget_error : public std::runtime_error
{
public:
  budget_error( std::size_t requested, std::size_t minimal )
      : std::runtime_error( "qubit budget " + std::to_string( requested ) + " is infeasible; smallest feasible budget is " +
                            ( minimal ? std::to_string( minimal ) : std::string( "unknown" ) ) ),
        requested( requested ), minimal( minimal ) {}
  std::size_t requested;
  std::size_t minimal; ///< 0 if none was found
};

/// Compute everything in topological order, copy out, uncompute in reverse.
Plan bennett_cleanup( Mdd const& g );

/*! \brief Uncompute every mutation path right after its last use.
 *
 * Paths are visited from the end of the topological order.  A path whose
 * inputs no longer hold the values it read is marked unclean; any unclean
 * path makes the plan finish with copy-out and reverse-all.
 */
Plan eager_cleanup( Mdd const& g );

/*! \brief Eager plan executed under a total qubit budget.
 *
 * When a step would exceed the budget, the values the rest of the plan
 * needs are copied, the steps since the previous checkpoint are undone, and
 * execution continues from the copies.  Throws budget_error if no schedule
 * of this kind fits.
 */
Plan incremental_cleanup( Mdd const& g, std::size_t qubit_budget );

Plan make_plan( Mdd const& g, Strategy s, std::size_t qubit_budget = 0 );

} // namespace revs
