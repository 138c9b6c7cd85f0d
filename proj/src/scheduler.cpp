#include <revs/emitter.hpp>
#include <revs/scheduler.hpp>

#include <algorithm>
#include <list>
#include <map>
#include <set>
#include <optional>

namespace revs
{

char const* to_string( Strategy s )
{
  switch ( s )
  {
  case Strategy::bennett: return "bennett";
  case Strategy::eager: return "eager";
  case Strategy::incremental: return "incremental";
  }
  return "?";
}

Strategy parse_strategy( std::string const& name )
{
  if ( name == "bennett" )
    return Strategy::bennett;
  if ( name == "eager" )
    return Strategy::eager;
  if ( name == "incremental" )
    return Strategy::incremental;
  throw std::invalid_argument( "unknown strategy '" + name + "'" );
}

char const* to_string( Disposition d )
{
  switch ( d )
  {
  case Disposition::kept: return "kept";
  case Disposition::cleaned_eagerly: return "cleaned_eagerly";
  case Disposition::checkpointed: return "checkpointed";
  case Disposition::bennett_cleaned: return "bennett_cleaned";
  case Disposition::unclean: return "unclean";
  }
  return "?";
}

namespace
{

bool schedulable( MddNode const& n )
{
  return n.kind == NodeKind::init || n.kind == NodeKind::op || n.kind == NodeKind::clean;
}

} // namespace

Plan bennett_cleanup( Mdd const& g )
{
  Plan p;
  p.strategy = Strategy::bennett;
  p.disposition.assign( g.size(), Disposition::kept );
  std::vector<NodeId> done;
  for ( auto v : topo_order( g ) )
    if ( schedulable( g[v] ) )
    {
      p.steps.push_back( Step::compute( v ) );
      p.disposition[v] = Disposition::bennett_cleaned;
      done.push_back( v );
    }
  p.steps.push_back( { StepKind::copy_out } );
  for ( auto it = done.rbegin(); it != done.rend(); ++it )
    p.steps.push_back( Step::uncompute( *it ) );
  p.copy_and_reverse = true;
  return p;
}

namespace
{

/*! Step list with order labels, so that "which version does this location
 *  hold right after step s" is a binary search over that location's steps.
 */
class StepList
{
public:
  static constexpr std::size_t no_owner = std::size_t( -1 );
  struct Entry
  {
    Step step;
    std::uint64_t label;
    std::size_t owner; ///< path whose cleanup emitted the step
  };
  using Iter = std::list<Entry>::iterator;

  explicit StepList( Mdd const& g )
      : g_( g ), events_( g.num_locs ), readers_( g.size() ), own_( g.size() ), has_own_( g.size(), 0 ) {}

  Iter push_back( Step s )
  {
    auto label = list_.empty() ? spacing : list_.back().label + spacing;
    list_.push_back( { std::move( s ), label, no_owner } );
    auto it = std::prev( list_.end() );
    index( it );
    return it;
  }

  Iter insert_after( Iter pos, Step s, std::size_t owner )
  {
    auto next = std::next( pos );
    if ( next != list_.end() && next->label - pos->label < 2 )
      relabel();
    auto label = next == list_.end() ? pos->label + spacing : pos->label + ( next->label - pos->label ) / 2;
    auto it = list_.insert( next, { std::move( s ), label, owner } );
    index( it );
    return it;
  }

  /// Last step reading node `v`, or the step computing it.
  Iter last_use( NodeId v ) const
  {
    auto best = own_[v];
    for ( auto r : readers_[v] )
      if ( r->label > best->label )
        best = r;
    return best;
  }

  bool computed( NodeId v ) const { return has_own_[v]; }
  static Iter later( Iter a, Iter b ) { return b->label > a->label ? b : a; }

  /// Last step that changes location `l`; `fallback` if there is none later.
  Iter last_event( Loc l, Iter fallback ) const
  {
    auto const& ev = events_[l];
    return !ev.empty() && ev.back()->label > fallback->label ? ev.back() : fallback;
  }

  /// Version location `l` holds right after `pos`.
  NodeId version_after( Loc l, Iter pos, NodeId initial ) const
  {
    auto const& ev = events_[l];
    auto it = std::upper_bound( ev.begin(), ev.end(), pos->label, []( std::uint64_t lab, Iter e ) { return lab < e->label; } );
    if ( it == ev.begin() )
      return initial;
    auto const& s = ( *std::prev( it ) )->step;
    auto const& n = g_[s.node];
    if ( s.kind == StepKind::compute )
      return n.id;
    return n.kind == NodeKind::init ? no_node : n.pred;
  }

  std::vector<Step> steps() const
  {
    std::vector<Step> r;
    r.reserve( list_.size() );
    for ( auto const& e : list_ )
      r.push_back( e.step );
    return r;
  }

  std::vector<std::size_t> owners() const
  {
    std::vector<std::size_t> r;
    for ( auto const& e : list_ )
      r.push_back( e.owner );
    return r;
  }

private:
  static constexpr std::uint64_t spacing = std::uint64_t{ 1 } << 32;
  Mdd const& g_;
  std::list<Entry> list_;
  std::vector<std::vector<Iter>> events_;
  std::vector<std::vector<Iter>> readers_;
  std::vector<Iter> own_;
  std::vector<char> has_own_;

  void relabel()
  {
    std::uint64_t label = 0;
    for ( auto& e : list_ )
      e.label = label += spacing;
  }

  void index( Iter it )
  {
    auto const& n = g_[it->step.node];
    auto& ev = events_[n.loc];
    auto pos = std::upper_bound( ev.begin(), ev.end(), it->label, []( std::uint64_t lab, Iter e ) { return lab < e->label; } );
    ev.insert( pos, it );
    if ( it->step.kind == StepKind::compute && !has_own_[n.id] )
    {
      own_[n.id] = it;
      has_own_[n.id] = 1;
    }
    if ( n.kind == NodeKind::op )
      for ( auto d : n.deps )
        readers_[d].push_back( it );
  }
};

} // namespace

namespace
{

struct EagerCore
{
  std::vector<Step> steps;
  /// Path index of the cleanup that emitted each step; no_owner for the forward pass.
  std::vector<std::size_t> owner;
  std::vector<Disposition> disposition;
  std::size_t unclean = 0;
};

/*! Plans the steps that move locations along their mutation chains at one
 *  position of the step list.  A dependency whose location has moved on is
 *  slid back to the needed value, and forward again once the step is done.
 */
class Slider
{
public:
  Slider( Mdd const& g, StepList const& list, std::vector<NodeId> const& initial, StepList::Iter pos )
      : g_( g ), list_( list ), initial_( initial ), pos_( pos ), locked_( g.num_locs, 0 ) {}

  std::vector<Step> steps;

  bool holds( NodeId d )
  {
    auto v = version( g_[d].loc );
    return v != no_node && g_[v].kind != NodeKind::clean && g_[v].value == g_[d].value;
  }

  /// Applies or undoes op `w`, whose location already holds the right value.
  bool step( NodeId w, bool forward, int depth )
  {
    if ( depth > max_depth )
      return false;
    auto const& n = g_[w];
    locked_[n.loc]++;
    std::vector<std::pair<NodeId, bool>> slid;
    bool ok = true;
    for ( auto d : n.deps )
      if ( !holds( d ) && !slide_to( d, depth + 1, slid ) )
      {
        ok = false;
        break;
      }
    if ( ok )
    {
      steps.push_back( forward ? Step::compute( w ) : Step::uncompute( w ) );
      cur_[n.loc] = forward ? w : n.pred;
    }
    for ( auto it = slid.rbegin(); ok && it != slid.rend(); ++it )
      ok = step( it->first, !it->second, depth + 1 );
    locked_[n.loc]--;
    return ok;
  }

private:
  static constexpr int max_depth = 8;
  Mdd const& g_;
  StepList const& list_;
  std::vector<NodeId> const& initial_;
  StepList::Iter pos_;
  std::map<Loc, NodeId> cur_;
  std::vector<int> locked_;

  NodeId version( Loc l ) const
  {
    auto it = cur_.find( l );
    return it != cur_.end() ? it->second : list_.version_after( l, pos_, initial_[l] );
  }

  /// Moves the location of `d` to the nearest chain node with d's value.
  bool slide_to( NodeId d, int depth, std::vector<std::pair<NodeId, bool>>& slid )
  {
    auto l = g_[d].loc;
    auto v = version( l );
    if ( locked_[l] || ( v != no_node && g_[v].kind == NodeKind::clean ) )
      return false;
    auto const& chain = g_.paths()[g_.path_of( d )];
    if ( v == no_node )
    {
      // already released: recompute from the init, undone again afterwards
      if ( g_[chain.front()].kind != NodeKind::init )
        return false;
      for ( std::size_t k = 0; k < chain.size() && g_[chain[k]].kind != NodeKind::clean; ++k )
      {
        if ( !step( chain[k], true, depth ) )
          return false;
        slid.emplace_back( chain[k], true );
        if ( g_[chain[k]].value == g_[d].value )
          return true;
      }
      return false;
    }
    auto iv = static_cast<std::size_t>( std::find( chain.begin(), chain.end(), v ) - chain.begin() );
    for ( auto j = iv; j-- > 0; )
      if ( g_[chain[j]].value == g_[d].value )
      {
        for ( auto k = iv; k > j; --k )
        {
          if ( g_[chain[k]].kind != NodeKind::op || !step( chain[k], false, depth ) )
            return false;
          slid.emplace_back( chain[k], false );
        }
        return true;
      }
    for ( auto j = iv + 1; j < chain.size(); ++j )
      if ( g_[chain[j]].value == g_[d].value )
      {
        for ( auto k = iv + 1; k <= j; ++k )
        {
          if ( g_[chain[k]].kind != NodeKind::op || !step( chain[k], true, depth ) )
            return false;
          slid.emplace_back( chain[k], true );
        }
        return true;
      }
    return false;
  }
};

/// Orders path ends so that a path is cleaned before the paths it reads
/// from; undoing it needs their values.  Ties and cycles go by descending id.
std::vector<NodeId> consumers_first( Mdd const& g, std::vector<NodeId> ends )
{
  auto const np = g.paths().size();
  std::vector<std::size_t> end_of( np, no_node );
  for ( auto e : ends )
    end_of[g.path_of( e )] = e;
  // readers[q] = paths reading some node of q; pending[p] = unprocessed readers of p
  std::vector<std::set<std::size_t>> readers( np );
  for ( auto const& n : g.nodes )
    for ( auto d : n.deps )
    {
      auto q = g.path_of( d ), p = g.path_of( n.id );
      if ( p != q && end_of[p] != no_node && end_of[q] != no_node )
        readers[q].insert( p );
    }
  std::vector<std::size_t> pending( np, 0 );
  for ( std::size_t q = 0; q < np; ++q )
    pending[q] = readers[q].size();
  std::set<NodeId, std::greater<>> ready, rest( ends.begin(), ends.end() );
  for ( auto e : ends )
    if ( !pending[g.path_of( e )] )
      ready.insert( e );
  std::vector<NodeId> order;
  while ( !rest.empty() )
  {
    auto e = ready.empty() ? *rest.begin() : *ready.begin();
    ready.erase( e );
    rest.erase( e );
    order.push_back( e );
    for ( auto const& n : g.paths()[g.path_of( e )] )
      for ( auto d : g[n].deps )
      {
        auto q = g.path_of( d );
        if ( end_of[q] != no_node && rest.count( end_of[q] ) && readers[q].erase( g.path_of( e ) ) && !--pending[q] )
          ready.insert( end_of[q] );
      }
  }
  return order;
}

EagerCore eager_core( Mdd const& g )
{
  StepList list( g );
  EagerCore r;
  r.disposition.assign( g.size(), Disposition::kept );
  std::vector<NodeId> initial( g.num_locs, no_node );
  for ( auto v : g.inputs )
    initial[g[v].loc] = v;
  for ( auto v : topo_order( g ) )
    if ( schedulable( g[v] ) )
      list.push_back( Step::compute( v ) );

  // Path ends from the back of the topological order; ids are creation order.
  std::vector<NodeId> ends;
  for ( auto const& path : g.paths() )
  {
    auto end = path.back();
    auto k = g[end].kind;
    if ( k == NodeKind::output || k == NodeKind::clean || k == NodeKind::input )
      continue;
    ends.push_back( end );
  }
  ends = consumers_first( g, std::move( ends ) );

  for ( auto end : ends )
  {
    auto path = modification_path( g, end );
    auto head = path.front();
    // after every read of the end value (any version holding it) and after
    // other cleanups' slides of this location
    auto pos = list.last_use( end );
    for ( auto n : path )
      if ( n != end && g[n].value == g[end].value && list.computed( n ) )
        pos = list.later( pos, list.last_use( n ) );
    pos = list.last_event( g[end].loc, pos );
    // Ops after the first node holding the end value cancel out; only the
    // prefix up to that node has to be undone.
    std::size_t stop = 0;
    while ( g[path[stop]].value != g[end].value )
      ++stop;
    Slider sl( g, list, initial, pos );
    bool ok = true;
    for ( auto i = stop; ok && i >= 1; --i )
      if ( g[path[i]].kind == NodeKind::op )
        ok = sl.step( path[i], false, 0 );
    if ( !ok )
    {
      ++r.unclean;
      for ( auto n : path )
        if ( g[n].kind != NodeKind::input )
          r.disposition[n] = Disposition::unclean;
      continue;
    }
    if ( g[head].kind == NodeKind::init )
      sl.steps.push_back( Step::uncompute( head ) );
    auto owner = g.path_of( end );
    for ( auto& s : sl.steps )
      pos = list.insert_after( pos, std::move( s ), owner );
    for ( auto n : path )
      if ( g[n].kind != NodeKind::input )
        r.disposition[n] = Disposition::cleaned_eagerly;
  }
  r.steps = list.steps();
  r.owner = list.owners();
  return r;
}

} // namespace

Plan eager_cleanup( Mdd const& g )
{
  auto core = eager_core( g );
  Plan p;
  p.strategy = Strategy::eager;
  p.steps = std::move( core.steps );
  p.disposition = std::move( core.disposition );
  p.unclean = core.unclean;
  if ( p.unclean )
  {
    p.steps.push_back( { StepKind::copy_out } );
    p.steps.push_back( { StepKind::reverse_all } );
    p.copy_and_reverse = true;
  }
  return p;
}

namespace
{

/*! One attempt at fitting the eager steps into `budget`, checkpointing
 *  `reserve` wires early.  Once a segment is undone, the remaining eager
 *  cleanup of every path it touched is dropped; the final copy-and-reverse
 *  cleans those paths instead.
 */
std::optional<Plan> try_incremental( Mdd const& g, EagerCore const& core, std::size_t budget, std::size_t reserve )
{
  auto const& steps = core.steps;
  std::vector<char> dropped( g.paths().size(), 0 );
  auto skip = [&]( std::size_t i ) { return core.owner[i] != StepList::no_owner && dropped[core.owner[i]]; };

  Plan p;
  p.strategy = Strategy::incremental;
  p.qubit_budget = budget;
  p.disposition = core.disposition;
  p.unclean = core.unclean;
  auto drop_path = [&]( std::size_t k ) {
    if ( dropped[k] )
      return;
    dropped[k] = 1;
    for ( auto v : g.paths()[k] )
      if ( p.disposition[v] == Disposition::cleaned_eagerly )
        p.disposition[v] = Disposition::checkpointed;
  };

  Executor ex( g, false );
  std::vector<Step> segment;
  std::vector<NodeId> cp_version( g.num_locs, no_node );
  std::vector<char> cp_wire( g.num_locs, 0 );
  auto snapshot = [&] {
    for ( Loc l = 0; l < g.num_locs; ++l )
    {
      cp_version[l] = ex.version( l );
      cp_wire[l] = ex.has_wire( l );
    }
  };
  snapshot();

  auto checkpoint = [&]( std::size_t i ) {
    for ( auto const& s : segment )
      if ( s.kind == StepKind::compute )
        drop_path( g.path_of( s.node ) );
    std::vector<char> needed( g.num_locs, 0 );
    for ( auto o : g.outputs )
      needed[g[o].loc] = 1;
    for ( auto j = i; j < steps.size(); ++j )
    {
      if ( skip( j ) )
        continue;
      auto const& n = g[steps[j].node];
      needed[n.loc] = 1;
      for ( auto d : n.deps )
        needed[g[d].loc] = 1;
    }
    Step cp{ StepKind::checkpoint };
    for ( Loc l = 0; l < g.num_locs; ++l )
      if ( needed[l] && ex.has_wire( l ) && ( !cp_wire[l] || cp_version[l] != ex.version( l ) ) )
        cp.versions.push_back( ex.version( l ) );
    Step rb{ StepKind::rebind, no_node, cp.versions };
    ex.run( cp );
    p.steps.push_back( std::move( cp ) );
    for ( auto it = segment.rbegin(); it != segment.rend(); ++it )
    {
      Step inv{ it->kind == StepKind::compute ? StepKind::uncompute : StepKind::compute, it->node };
      ex.run( inv );
      p.steps.push_back( inv );
    }
    ex.run( rb );
    p.steps.push_back( std::move( rb ) );
    ++p.checkpoints;
    segment.clear();
    snapshot();
  };

  // Cleanup steps that slide other locations run as one unit, so that a
  // failure never leaves a location slid away from its value.
  auto group_end = [&]( std::size_t i ) {
    auto j = i + 1;
    auto o = core.owner[i];
    if ( o == StepList::no_owner )
      return j;
    bool slides = false;
    for ( ; j < steps.size() && core.owner[j] == o; ++j )
      ;
    for ( auto k = i; k < j; ++k )
      slides = slides || g.path_of( steps[k].node ) != o;
    return slides ? j : i + 1;
  };
  auto peak_of = [&]( std::size_t i, std::size_t j ) -> std::optional<Executor> {
    Executor trial = ex;
    trial.reset_peak();
    try
    {
      for ( auto k = i; k < j; ++k )
        trial.run( steps[k] );
    }
    catch ( plan_error const& )
    {
      return std::nullopt;
    }
    return trial;
  };

  try
  {
    for ( std::size_t i = 0; i < steps.size(); )
    {
      auto j = group_end( i );
      if ( skip( i ) )
      {
        i = j;
        continue;
      }
      if ( j > i + 1 )
      {
        auto trial = peak_of( i, j );
        if ( trial && trial->peak() + reserve > budget && !segment.empty() )
        {
          checkpoint( i );
          if ( skip( i ) )
          {
            i = j;
            continue;
          }
          trial = peak_of( i, j );
        }
        if ( !trial )
        {
          // A cleanup that relied on a dropped one; leave its path to the final reverse.
          drop_path( core.owner[i] );
          i = j;
          continue;
        }
        if ( trial->peak() > budget )
          return std::nullopt;
        auto before = ex.peak();
        ex = *trial;
        ex.raise_peak( before );
        for ( auto k = i; k < j; ++k )
        {
          p.steps.push_back( steps[k] );
          segment.push_back( steps[k] );
        }
        i = j;
        continue;
      }
      auto const& s = steps[i];
      if ( ex.live() + ex.demand( s ) + reserve > budget )
      {
        if ( segment.empty() )
          return std::nullopt;
        checkpoint( i );
        if ( skip( i ) )
        {
          ++i;
          continue;
        }
        if ( ex.live() + ex.demand( s ) > budget )
          return std::nullopt;
      }
      try
      {
        ex.run( s );
      }
      catch ( plan_error const& )
      {
        if ( core.owner[i] == StepList::no_owner )
          throw;
        drop_path( core.owner[i] );
        ++i;
        continue;
      }
      p.steps.push_back( s );
      segment.push_back( s );
      ++i;
    }
    if ( p.checkpoints || p.unclean )
    {
      for ( auto k : { StepKind::copy_out, StepKind::reverse_all } )
      {
        ex.run( Step{ k } );
        p.steps.push_back( Step{ k } );
      }
      p.copy_and_reverse = true;
    }
  }
  catch ( plan_error const& )
  {
    return std::nullopt;
  }
  if ( ex.peak() > budget )
    return std::nullopt;
  return p;
}

std::optional<Plan> fit( Mdd const& g, EagerCore const& core, std::size_t budget )
{
  constexpr std::size_t max_reserve = 8;
  for ( std::size_t r = 0; r <= max_reserve; ++r )
    if ( auto p = try_incremental( g, core, budget, r ) )
      return p;
  return std::nullopt;
}

} // namespace

Plan incremental_cleanup( Mdd const& g, std::size_t qubit_budget )
{
  auto core = eager_core( g );
  if ( auto p = fit( g, core, qubit_budget ) )
    return *p;
  Plan eager = eager_cleanup( g );
  auto ceiling = plan_width( g, eager );
  std::size_t minimal = 0;
  for ( auto b = std::max( qubit_budget + 1, g.inputs.size() + 1 ); b <= ceiling; ++b )
    if ( fit( g, core, b ) )
    {
      minimal = b;
      break;
    }
  if ( !minimal && ceiling > qubit_budget )
    minimal = ceiling;
  throw budget_error( qubit_budget, minimal );
}

Plan make_plan( Mdd const& g, Strategy s, std::size_t qubit_budget )
{
  switch ( s )
  {
  case Strategy::bennett: return bennett_cleanup( g );
  case Strategy::eager: return eager_cleanup( g );
  case Strategy::incremental: return incremental_cleanup( g, qubit_budget );
  }
  throw std::invalid_argument( "bad strategy" );
}

} // namespace revs
