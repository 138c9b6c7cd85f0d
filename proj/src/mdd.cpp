#include <revs/mdd.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <queue>

namespace revs
{

char const* to_string( NodeKind k )
{
  switch ( k )
  {
  case NodeKind::input: return "input";
  case NodeKind::init: return "init";
  case NodeKind::op: return "op";
  case NodeKind::clean: return "clean";
  case NodeKind::output: return "output";
  }
  return "?";
}

namespace
{

class Builder
{
public:
  explicit Builder( FlatProgram const& p ) : p_( p ), current_( p.num_locs, no_node ) {}

  Mdd run()
  {
    g_.num_locs = p_.num_locs;
    for ( Loc l = 0; l < p_.num_locs; ++l )
      g_.loc_names.push_back( p_.loc_name( l ) );

    std::uint32_t bit = 0;
    for ( auto l : p_.input_locs() )
    {
      auto n = add( NodeKind::input, l );
      g_.nodes[n].value = g_.values.input( bit++ );
      g_.inputs.push_back( n );
      current_[l] = n;
    }
    for ( auto const& s : p_.stmts )
    {
      switch ( s.kind )
      {
      case FlatKind::assign:
      {
        if ( current_[s.loc] != no_node )
          throw mdd_error( "assignment to live location " + p_.loc_name( s.loc ) );
        auto init = add( NodeKind::init, s.loc );
        current_[s.loc] = init;
        op( s.loc, s.expr );
        break;
      }
      case FlatKind::update:
        live( s.loc );
        op( s.loc, s.expr );
        break;
      case FlatKind::clean:
      {
        auto prev = live( s.loc );
        auto n = add( NodeKind::clean, s.loc );
        link( prev, n );
        if ( g_.nodes[prev].value != 0 )
          g_.unproven_cleans.push_back( n );
        g_.nodes[n].value = 0;
        current_[s.loc] = no_node;
        break;
      }
      }
    }
    // Each output needs its own version; repeats and constants get a fresh location.
    std::vector<bool> taken( g_.nodes.size(), false );
    Loc extra = p_.num_locs;
    for ( std::size_t i = 0; i < p_.outputs.size(); ++i )
    {
      auto const& o = p_.outputs[i];
      NodeId src = no_node;
      if ( !o.is_const )
        src = live( o.loc );
      if ( src == no_node || taken[src] )
      {
        auto l = extra++;
        current_.push_back( no_node );
        g_.loc_names.push_back( "out_" + std::to_string( i ) );
        auto init = add( NodeKind::init, l );
        current_[l] = init;
        BoolExp e = o.is_const ? make_const( o.value ) : make_var( o.loc );
        src = op( l, e );
      }
      taken.resize( g_.nodes.size(), false );
      taken[src] = true;
      auto out = add( NodeKind::output, g_.nodes[src].loc );
      g_.nodes[out].output_index = i;
      link( src, out );
      g_.outputs.push_back( out );
    }
    g_.num_locs = extra;
    return std::move( g_ );
  }

private:
  FlatProgram const& p_;
  std::vector<NodeId> current_;
  Mdd g_;

  NodeId add( NodeKind k, Loc l )
  {
    MddNode n;
    n.id = static_cast<NodeId>( g_.nodes.size() );
    n.kind = k;
    n.loc = l;
    g_.nodes.push_back( std::move( n ) );
    return g_.nodes.back().id;
  }

  void link( NodeId from, NodeId to )
  {
    if ( g_.nodes[from].succ != no_node )
      throw mdd_error( "node " + std::to_string( from ) + " already has a successor" );
    g_.nodes[from].succ = to;
    g_.nodes[to].pred = from;
    g_.nodes[to].value = g_.nodes[from].value;
  }

  NodeId live( Loc l )
  {
    if ( l >= current_.size() || current_[l] == no_node )
      throw mdd_error( "use of undefined location " + p_.loc_name( l ) );
    return current_[l];
  }

  /// Op node computing `e` (over locations) onto location `l`.
  NodeId op( Loc l, BoolExp const& e )
  {
    auto prev = live( l );
    auto expr = rename( e, [&]( std::uint32_t v ) {
      if ( v == l )
        throw mdd_error( "in-place expression reads its own target " + p_.loc_name( l ) );
      return live( v );
    } );
    auto n = add( NodeKind::op, l );
    link( prev, n );
    auto& node = g_.nodes[n];
    collect_vars( expr, node.deps );
    std::sort( node.deps.begin(), node.deps.end() );
    for ( auto d : node.deps )
      g_.nodes[d].dependents.push_back( n );
    auto v = g_.values.of( expr, [&]( std::uint32_t d ) { return g_.nodes[d].value; } );
    node.value = g_.values.xor_( node.value, v );
    node.expr = std::move( expr );
    current_[l] = n;
    return n;
  }
};

} // namespace

std::vector<std::vector<NodeId>> const& Mdd::paths() const
{
  if ( paths_.empty() && !nodes.empty() )
  {
    path_index_.assign( nodes.size(), 0 );
    for ( auto const& n : nodes )
    {
      if ( n.pred != no_node )
        continue;
      std::vector<NodeId> path;
      for ( auto v = n.id; v != no_node; v = nodes[v].succ )
      {
        path_index_[v] = paths_.size();
        path.push_back( v );
      }
      paths_.push_back( std::move( path ) );
    }
  }
  return paths_;
}

std::size_t Mdd::path_of( NodeId n ) const
{
  paths();
  return path_index_[n];
}

Mdd build_mdd( FlatProgram const& p )
{
  return Builder( p ).run();
}

std::vector<NodeId> topo_order( Mdd const& g )
{
  std::vector<std::size_t> indegree( g.size(), 0 );
  for ( auto const& n : g.nodes )
  {
    indegree[n.id] += n.deps.size();
    if ( n.pred != no_node )
      ++indegree[n.id];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for ( auto const& n : g.nodes )
    if ( indegree[n.id] == 0 )
      ready.push( n.id );
  std::vector<NodeId> order;
  order.reserve( g.size() );
  while ( !ready.empty() )
  {
    auto v = ready.top();
    ready.pop();
    order.push_back( v );
    auto release = [&]( NodeId w ) {
      if ( --indegree[w] == 0 )
        ready.push( w );
    };
    for ( auto w : g[v].dependents )
      release( w );
    if ( g[v].succ != no_node )
      release( g[v].succ );
  }
  if ( order.size() != g.size() )
    throw mdd_error( "dependency cycle in MDD" );
  return order;
}

std::size_t last_dependent_node( Mdd const& g, NodeId v, std::vector<std::size_t> const& topo_index )
{
  auto best = topo_index[v];
  for ( auto w : g[v].dependents )
    best = std::max( best, topo_index[w] );
  return best;
}

std::size_t last_dependent_node( Mdd const& g, NodeId v )
{
  auto order = topo_order( g );
  std::vector<std::size_t> index( g.size() );
  for ( std::size_t i = 0; i < order.size(); ++i )
    index[order[i]] = i;
  return last_dependent_node( g, v, index );
}

std::vector<NodeId> modification_path( Mdd const& g, NodeId v )
{
  std::vector<NodeId> path;
  for ( auto n = v; n != no_node; n = g[n].pred )
    path.push_back( n );
  std::reverse( path.begin(), path.end() );
  return path;
}

std::vector<NodeId> input_nodes( Mdd const& g, std::vector<NodeId> const& path )
{
  std::vector<NodeId> r;
  for ( auto n : path )
    for ( auto d : g[n].deps )
      if ( std::find( path.begin(), path.end(), d ) == path.end() )
        r.push_back( d );
  std::sort( r.begin(), r.end() );
  r.erase( std::unique( r.begin(), r.end() ), r.end() );
  return r;
}

std::vector<PathPair> classify_paths( Mdd const& g )
{
  // bit 1: edge from the lower path to the higher one, bit 2: the reverse.
  std::map<std::pair<std::size_t, std::size_t>, int> dirs;
  for ( auto const& n : g.nodes )
    for ( auto d : n.deps )
    {
      auto from = g.path_of( d ), to = g.path_of( n.id );
      if ( from == to )
        continue;
      if ( from < to )
        dirs[{ from, to }] |= 1;
      else
        dirs[{ to, from }] |= 2;
    }

  // Indirect dependence counts too: a pair is interdependent when either
  // path reaches the other through any chain of edges.  reach[v] holds the
  // paths reachable from v; a path head reaches whatever its chain reaches.
  auto const np = g.paths().size();
  auto const words = ( np + 63 ) / 64;
  std::vector<std::uint64_t> reach( g.size() * words, 0 );
  auto row = [&]( NodeId v ) { return reach.data() + std::size_t( v ) * words; };
  auto order = topo_order( g );
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    auto const& n = g[*it];
    auto* r = row( n.id );
    auto add = [&]( NodeId s ) {
      auto p = g.path_of( s );
      r[p / 64] |= std::uint64_t{ 1 } << ( p % 64 );
      auto const* rs = row( s );
      for ( std::size_t w = 0; w < words; ++w )
        r[w] |= rs[w];
    };
    for ( auto s : n.dependents )
      add( s );
    if ( n.succ != no_node )
      add( n.succ );
  }
  auto reaches = [&]( std::size_t from, std::size_t to ) {
    auto const* r = row( g.paths()[from].front() );
    return ( r[to / 64] >> ( to % 64 ) ) & 1u;
  };

  std::vector<PathPair> r;
  for ( auto const& [key, bits] : dirs )
  {
    auto both = bits == 3 || ( bits == 1 && reaches( key.second, key.first ) ) || ( bits == 2 && reaches( key.first, key.second ) );
    r.push_back( { key.first, key.second, both ? PathRelation::interdependent : PathRelation::one_way } );
  }
  return r;
}

bool all_one_way( Mdd const& g )
{
  auto pairs = classify_paths( g );
  return std::none_of( pairs.begin(), pairs.end(), []( auto const& p ) { return p.relation == PathRelation::interdependent; } );
}

BitVector evaluate_mdd( Mdd const& g, BitVector const& inputs )
{
  if ( inputs.size() != g.inputs.size() )
    throw mdd_error( "expected " + std::to_string( g.inputs.size() ) + " input bits" );
  std::vector<char> val( g.size(), 0 );
  for ( std::size_t i = 0; i < g.inputs.size(); ++i )
    val[g.inputs[i]] = inputs.get( i );
  for ( auto v : topo_order( g ) )
  {
    auto const& n = g[v];
    switch ( n.kind )
    {
    case NodeKind::input:
    case NodeKind::init:
      break;
    case NodeKind::op:
      val[v] = val[n.pred] ^ eval( n.expr, [&]( std::uint32_t d ) -> bool { return val[d]; } );
      break;
    case NodeKind::clean:
      if ( val[n.pred] )
        throw mdd_error( "clean node " + std::to_string( v ) + " sees a nonzero value" );
      break;
    case NodeKind::output:
      val[v] = val[n.pred];
      break;
    }
  }
  BitVector out( g.outputs.size() );
  for ( std::size_t i = 0; i < g.outputs.size(); ++i )
    out.set( i, val[g.outputs[i]] );
  return out;
}

void write_dot( std::ostream& os, Mdd const& g )
{
  auto name = [&]( std::uint32_t d ) { return "n" + std::to_string( d ); };
  os << "digraph mdd {\n  rankdir=BT;\n";
  for ( auto const& n : g.nodes )
  {
    std::string label;
    switch ( n.kind )
    {
    case NodeKind::input: label = "var " + g.loc_names[n.loc]; break;
    case NodeKind::init: label = "init"; break;
    case NodeKind::clean: label = "clean"; break;
    case NodeKind::output: label = "Out " + std::to_string( n.output_index ); break;
    case NodeKind::op: label = to_string( n.expr, name ); break;
    }
    std::string escaped;
    for ( char c : label )
    {
      if ( c == '"' || c == '\\' )
        escaped += '\\';
      escaped += c;
    }
    os << "  n" << n.id << " [label=\"" << n.id << ": " << escaped << "\"];\n";
  }
  for ( auto const& n : g.nodes )
  {
    for ( auto d : n.deps )
      os << "  n" << d << " -> n" << n.id << " [style=dashed];\n";
    if ( n.succ != no_node )
      os << "  n" << n.id << " -> n" << n.succ << " [style=bold];\n";
  }
  os << "}\n";
}

} // namespace revs
