#pragma once

#include <revs/ancilla_heap.hpp>
#include <revs/circuit.hpp>
#include <revs/mdd.hpp>
#include <revs/scheduler.hpp>

#include <algorithm>
#include <vector>

namespace revs
{

inline constexpr Wire no_wire = std::numeric_limits<Wire>::max();

/*! \brief Runs plan steps against wire assignments.
 *
 * Input bits sit on wires 0..n-1; every other wire comes from a min-index
 * heap.  Operation inputs are looked up by value: a dependency is available
 * when its location currently holds a version with the same symbolic value.
 * With `emit_gates` false only wire accounting is done.
 */
class Executor
{
public:
  Executor( Mdd const& g, bool emit_gates );

  /// Wires `s` needs beyond the live set, transient ancillas included.
  std::size_t demand( Step const& s ) const;
  void run( Step const& s );

  std::size_t live() const { return num_inputs_ + heap_.live_count(); }
  std::size_t peak() const { return peak_; }
  void reset_peak() { peak_ = live(); }
  void raise_peak( std::size_t p ) { peak_ = std::max( peak_, p ); }
  NodeId version( Loc l ) const { return version_[l]; }
  bool has_wire( Loc l ) const { return wire_[l] != no_wire; }
  /// True once copy-out ran.
  bool copied() const { return copy_done_; }

  Circuit circuit() const;

private:
  enum class Act : std::uint8_t
  {
    alloc,
    free,
    apply,
    unapply,
    copy,
    uncopy,
    rebind,
    unbind
  };
  struct Action
  {
    Act kind;
    Loc loc;
    NodeId node;          ///< op for apply; version after alloc/free; copied version
    NodeId other = no_node; ///< version before alloc/free
  };
  struct Orphan
  {
    Loc loc;
    Wire wire;
    NodeId version;
  };

  Mdd const* g_;
  bool emit_;
  std::size_t num_inputs_;
  AncillaHeap heap_;
  std::vector<Wire> wire_;
  std::vector<NodeId> version_;
  std::vector<std::size_t> transient_;
  std::vector<Gate> gates_;
  std::vector<Action> log_;
  bool copy_done_ = false;
  std::vector<Wire> copies_out_;
  std::vector<std::pair<NodeId, Wire>> pending_;
  std::vector<Orphan> orphans_;
  std::size_t peak_ = 0;

  void act( Action a, bool record );
  static Action inverse( Action const& a );
  void touch_peak( std::size_t extra );
  Wire dep_wire( NodeId d ) const;
  void synth( NodeId op, bool forward );
};

/// Executes `plan` and returns the circuit.
Circuit emit( Mdd const& g, Plan const& plan );

/// Peak wire count of `plan` without building gates.
std::size_t plan_width( Mdd const& g, Plan const& plan );

} // namespace revs
