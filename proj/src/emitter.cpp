#include <revs/emitter.hpp>

#include <algorithm>

namespace revs
{

Executor::Executor( Mdd const& g, bool emit_gates )
    : g_( &g ), emit_( emit_gates ), num_inputs_( g.inputs.size() ), heap_( static_cast<Wire>( g.inputs.size() ) ),
      wire_( g.num_locs, no_wire ), version_( g.num_locs, no_node ), transient_( g.size(), 0 )
{
  for ( std::size_t i = 0; i < g.inputs.size(); ++i )
  {
    auto const& n = g[g.inputs[i]];
    wire_[n.loc] = static_cast<Wire>( i );
    version_[n.loc] = n.id;
  }
  for ( auto const& n : g.nodes )
    if ( n.kind == NodeKind::op )
      transient_[n.id] = ancilla_need( n.expr );
  peak_ = num_inputs_;
}

std::size_t Executor::demand( Step const& s ) const
{
  switch ( s.kind )
  {
  case StepKind::compute:
    if ( g_->nodes[s.node].kind == NodeKind::init )
      return 1;
    return g_->nodes[s.node].kind == NodeKind::op ? transient_[s.node] : 0;
  case StepKind::uncompute:
    if ( g_->nodes[s.node].kind == NodeKind::clean )
      return 1;
    return g_->nodes[s.node].kind == NodeKind::op ? transient_[s.node] : 0;
  case StepKind::copy_out: return g_->outputs.size();
  case StepKind::checkpoint: return s.versions.size();
  default: return 0;
  }
}

void Executor::touch_peak( std::size_t extra )
{
  peak_ = std::max( peak_, live() + extra );
}

Wire Executor::dep_wire( NodeId d ) const
{
  auto l = g_->nodes[d].loc;
  auto v = version_[l];
  if ( wire_[l] == no_wire || v == no_node || g_->nodes[v].value != g_->nodes[d].value )
    throw plan_error( "value of node " + std::to_string( d ) + " is not available on " + g_->loc_names[l] );
  return wire_[l];
}

void Executor::synth( NodeId op, bool forward )
{
  auto const& n = g_->nodes[op];
  // Versions with equal values are interchangeable: gates only see values.
  auto expect = forward ? n.pred : op;
  auto cur = version_[n.loc];
  if ( wire_[n.loc] == no_wire || cur == no_node || ( cur != expect && g_->nodes[cur].value != g_->nodes[expect].value ) )
    throw plan_error( std::string( forward ? "compute" : "uncompute" ) + " of node " + std::to_string( op ) +
                      " out of order on " + g_->loc_names[n.loc] );
  std::vector<Wire> wires;
  for ( auto d : n.deps )
    wires.push_back( dep_wire( d ) );
  touch_peak( transient_[op] );
  if ( emit_ )
  {
    auto e = rename( n.expr, [&]( std::uint32_t d ) {
      auto it = std::lower_bound( n.deps.begin(), n.deps.end(), d );
      return wires[it - n.deps.begin()];
    } );
    std::vector<Gate> gs;
    synthesize( e, wire_[n.loc], heap_, gs );
    if ( forward )
      gates_.insert( gates_.end(), gs.begin(), gs.end() );
    else
      gates_.insert( gates_.end(), gs.rbegin(), gs.rend() );
  }
  version_[n.loc] = forward ? op : n.pred;
}

Executor::Action Executor::inverse( Action const& a )
{
  Action r = a;
  switch ( a.kind )
  {
  case Act::alloc: r.kind = Act::free; break;
  case Act::free: r.kind = Act::alloc; break;
  case Act::apply: r.kind = Act::unapply; return r;
  case Act::unapply: r.kind = Act::apply; return r;
  case Act::copy: r.kind = Act::uncopy; return r;
  case Act::uncopy: r.kind = Act::copy; return r;
  case Act::rebind: r.kind = Act::unbind; return r;
  case Act::unbind: r.kind = Act::rebind; return r;
  }
  std::swap( r.node, r.other );
  return r;
}

void Executor::act( Action a, bool record )
{
  auto l = a.loc;
  switch ( a.kind )
  {
  case Act::alloc:
    if ( wire_[l] != no_wire )
      throw plan_error( "location " + g_->loc_names[l] + " already holds a wire" );
    wire_[l] = heap_.alloc();
    version_[l] = a.node;
    touch_peak( 0 );
    break;
  case Act::free:
    if ( wire_[l] == no_wire || version_[l] == no_node || a.other == no_node ||
         ( version_[l] != a.other && g_->nodes[version_[l]].value != g_->nodes[a.other].value ) )
      throw plan_error( "release of " + g_->loc_names[l] + " in the wrong state" );
    a.other = version_[l]; // so that undoing the release restores the exact version
    heap_.release( wire_[l] );
    wire_[l] = no_wire;
    version_[l] = a.node;
    break;
  case Act::apply: synth( a.node, true ); break;
  case Act::unapply: synth( a.node, false ); break;
  case Act::copy:
  {
    if ( wire_[l] == no_wire || version_[l] != a.node )
      throw plan_error( "checkpoint of node " + std::to_string( a.node ) + " that is not current" );
    auto w = heap_.alloc();
    touch_peak( 0 );
    if ( emit_ )
      gates_.push_back( Gate::cnot( wire_[l], w ) );
    pending_.emplace_back( a.node, w );
    break;
  }
  case Act::uncopy:
  {
    auto it = std::find_if( pending_.rbegin(), pending_.rend(), [&]( auto const& p ) { return p.first == a.node; } );
    if ( it == pending_.rend() || version_[l] != a.node )
      throw plan_error( "no checkpoint copy of node " + std::to_string( a.node ) );
    if ( emit_ )
      gates_.push_back( Gate::cnot( wire_[l], it->second ) );
    heap_.release( it->second );
    pending_.erase( std::next( it ).base() );
    break;
  }
  case Act::rebind:
  {
    auto it = std::find_if( pending_.rbegin(), pending_.rend(), [&]( auto const& p ) { return p.first == a.node; } );
    if ( it == pending_.rend() )
      throw plan_error( "rebind of node " + std::to_string( a.node ) + " without a checkpoint" );
    orphans_.push_back( { l, wire_[l], version_[l] } );
    wire_[l] = it->second;
    version_[l] = a.node;
    pending_.erase( std::next( it ).base() );
    break;
  }
  case Act::unbind:
  {
    auto it = std::find_if( orphans_.rbegin(), orphans_.rend(), [&]( auto const& o ) { return o.loc == l; } );
    if ( it == orphans_.rend() || version_[l] != a.node )
      throw plan_error( "unbind of " + g_->loc_names[l] + " without a rebind" );
    pending_.emplace_back( a.node, wire_[l] );
    wire_[l] = it->wire;
    version_[l] = it->version;
    orphans_.erase( std::next( it ).base() );
    break;
  }
  }
  if ( record )
    log_.push_back( a );
}

void Executor::run( Step const& s )
{
  auto node_action = [&]( NodeId id, bool forward ) {
    auto const& n = g_->nodes[id];
    auto l = n.loc;
    switch ( n.kind )
    {
    case NodeKind::init:
      if ( forward )
        act( { Act::alloc, l, id, version_[l] }, true );
      else
        act( { Act::free, l, no_node, id }, true );
      break;
    case NodeKind::op: act( { forward ? Act::apply : Act::unapply, l, id }, true ); break;
    case NodeKind::clean:
      if ( forward )
        act( { Act::free, l, id, n.pred }, true );
      else
        act( { Act::alloc, l, n.pred, id }, true );
      break;
    default: throw plan_error( std::string( "cannot schedule " ) + to_string( n.kind ) + " node " + std::to_string( id ) );
    }
  };

  switch ( s.kind )
  {
  case StepKind::compute: node_action( s.node, true ); break;
  case StepKind::uncompute: node_action( s.node, false ); break;
  case StepKind::copy_out:
    if ( copy_done_ )
      throw plan_error( "second copy-out" );
    for ( auto o : g_->outputs )
    {
      auto src = dep_wire( g_->nodes[o].pred );
      auto w = heap_.alloc();
      touch_peak( 0 );
      if ( emit_ )
        gates_.push_back( Gate::cnot( src, w ) );
      copies_out_.push_back( w );
    }
    copy_done_ = true;
    break;
  case StepKind::reverse_all:
    for ( auto it = log_.rbegin(); it != log_.rend(); ++it )
      act( inverse( *it ), false );
    log_.clear();
    break;
  case StepKind::checkpoint:
    for ( auto v : s.versions )
      act( { Act::copy, g_->nodes[v].loc, v }, true );
    break;
  case StepKind::rebind:
    for ( auto v : s.versions )
      act( { Act::rebind, g_->nodes[v].loc, v }, true );
    break;
  }
}

Circuit Executor::circuit() const
{
  Circuit c;
  c.num_inputs = num_inputs_;
  c.width = num_inputs_ + heap_.high_water();
  c.gates = gates_;
  if ( copy_done_ )
    c.outputs = copies_out_;
  else
    for ( auto o : g_->outputs )
      c.outputs.push_back( dep_wire( g_->nodes[o].pred ) );
  return c;
}

Circuit emit( Mdd const& g, Plan const& plan )
{
  Executor ex( g, true );
  for ( auto const& s : plan.steps )
    ex.run( s );
  return ex.circuit();
}

std::size_t plan_width( Mdd const& g, Plan const& plan )
{
  Executor ex( g, false );
  for ( auto const& s : plan.steps )
    ex.run( s );
  return ex.peak();
}

} // namespace revs
