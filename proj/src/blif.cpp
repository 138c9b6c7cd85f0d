#include <revs/blif.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace revs
{

Cube Cube::parse( std::string const& s )
{
  Cube c;
  for ( char ch : s )
  {
    switch ( ch )
    {
    case '0': c.lits.push_back( Literal::zero ); break;
    case '1': c.lits.push_back( Literal::one ); break;
    case '-': c.lits.push_back( Literal::dont_care ); break;
    default: throw blif_error( std::string( "bad cube character '" ) + ch + "'" );
    }
  }
  return c;
}

std::string Cube::to_string() const
{
  std::string s;
  for ( auto l : lits )
    s += l == Literal::zero ? '0' : l == Literal::one ? '1' : '-';
  return s;
}

namespace
{

struct Line
{
  std::size_t number;
  std::vector<std::string> words;
  bool cliques = false; ///< a `#.cliques` annotation
};

std::vector<Line> logical_lines( std::string const& text )
{
  std::vector<Line> out;
  std::istringstream in( text );
  std::string raw, pending;
  std::size_t number = 0, start = 0;
  while ( std::getline( in, raw ) )
  {
    ++number;
    if ( pending.empty() )
      start = number;
    bool annotation = raw.rfind( "#.cliques", 0 ) == 0;
    if ( annotation )
    {
      Line l{ number, {}, true };
      std::istringstream ws( raw.substr( 9 ) );
      for ( std::string w; ws >> w; )
        l.words.push_back( w );
      out.push_back( std::move( l ) );
      continue;
    }
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    while ( !raw.empty() && ( raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t' ) )
      raw.pop_back();
    if ( !raw.empty() && raw.back() == '\\' )
    {
      raw.pop_back();
      pending += raw + ' ';
      continue;
    }
    pending += raw;
    Line l{ start, {}, false };
    std::istringstream ws( pending );
    for ( std::string w; ws >> w; )
      l.words.push_back( w );
    pending.clear();
    if ( !l.words.empty() )
      out.push_back( std::move( l ) );
  }
  return out;
}

/// Covers sorted so that each reads only inputs and earlier covers.
std::vector<Cover> dependency_order( std::vector<Cover> covers, std::vector<std::string> const& inputs,
                                     std::vector<std::size_t> const& lines )
{
  std::map<std::string, std::size_t> def;
  for ( std::size_t i = 0; i < covers.size(); ++i )
    def[covers[i].output] = i;
  std::map<std::string, bool> is_input;
  for ( auto const& s : inputs )
    is_input[s] = true;
  std::vector<int> state( covers.size(), 0 );
  std::vector<std::size_t> order;
  // Iterative DFS keeps deep netlists off the call stack.
  for ( std::size_t root = 0; root < covers.size(); ++root )
  {
    if ( state[root] )
      continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{ { root, 0 } };
    state[root] = 1;
    while ( !stack.empty() )
    {
      auto& [c, next] = stack.back();
      if ( next == covers[c].inputs.size() )
      {
        state[c] = 2;
        order.push_back( c );
        stack.pop_back();
        continue;
      }
      auto const& sig = covers[c].inputs[next++];
      if ( is_input.count( sig ) )
        continue;
      auto it = def.find( sig );
      if ( it == def.end() )
        throw blif_error( "undefined signal '" + sig + "'", lines[c] );
      if ( state[it->second] == 1 )
        throw blif_error( "cyclic signal dependency through '" + sig + "'", lines[c] );
      if ( state[it->second] == 0 )
      {
        state[it->second] = 1;
        stack.emplace_back( it->second, 0 );
      }
    }
  }
  std::vector<Cover> r;
  for ( auto i : order )
    r.push_back( std::move( covers[i] ) );
  return r;
}

} // namespace

BlifNetlist parse_blif( std::string const& text )
{
  BlifNetlist n;
  std::vector<Cover> covers;
  std::vector<std::size_t> cover_lines;
  Cover* current = nullptr;
  bool ended = false;
  std::map<std::string, std::size_t> defined;

  for ( auto const& line : logical_lines( text ) )
  {
    auto const& w = line.words;
    if ( ended )
      break;
    if ( line.cliques )
    {
      if ( !current || !current->cubes.empty() )
        throw blif_error( "#.cliques must directly follow .names", line.number );
      for ( auto const& s : w )
        current->cliques.push_back( std::stoul( s ) );
      continue;
    }
    auto const& head = w[0];
    if ( head[0] != '.' )
    {
      if ( !current )
        throw blif_error( "cube line outside .names", line.number );
      auto arity = current->inputs.size();
      std::string cube = arity ? w[0] : "";
      std::string out = arity ? ( w.size() > 1 ? w[1] : "" ) : w[0];
      if ( w.size() != ( arity ? 2u : 1u ) || out.size() != 1 )
        throw blif_error( "malformed cube line", line.number );
      if ( out == "0" )
        throw blif_error( "off-set covers (output column 0) are not supported", line.number );
      if ( out != "1" )
        throw blif_error( "malformed output column '" + out + "'", line.number );
      if ( cube.size() != arity )
        throw blif_error( "cube '" + cube + "' has " + std::to_string( cube.size() ) + " columns, expected " +
                              std::to_string( arity ),
                          line.number );
      try
      {
        current->cubes.push_back( Cube::parse( cube ) );
      }
      catch ( blif_error const& e )
      {
        throw blif_error( e.what(), line.number );
      }
      continue;
    }
    current = nullptr;
    if ( head == ".model" )
      n.model = w.size() > 1 ? w[1] : "";
    else if ( head == ".inputs" )
      n.inputs.insert( n.inputs.end(), w.begin() + 1, w.end() );
    else if ( head == ".outputs" )
      n.outputs.insert( n.outputs.end(), w.begin() + 1, w.end() );
    else if ( head == ".names" )
    {
      if ( w.size() < 2 )
        throw blif_error( ".names needs an output signal", line.number );
      Cover c;
      c.inputs.assign( w.begin() + 1, w.end() - 1 );
      c.output = w.back();
      if ( defined.count( c.output ) )
        throw blif_error( "signal '" + c.output + "' defined twice", line.number );
      defined[c.output] = line.number;
      covers.push_back( std::move( c ) );
      cover_lines.push_back( line.number );
      current = &covers.back();
    }
    else if ( head == ".end" )
      ended = true;
    else if ( head == ".latch" || head == ".clock" || head == ".subckt" || head == ".mlatch" )
      throw blif_error( "sequential/hierarchical unsupported (" + head + ")", line.number );
    else
      throw blif_error( "unsupported directive " + head, line.number );
  }

  std::map<std::string, int> seen;
  for ( auto const& s : n.inputs )
    if ( seen[s]++ )
      throw blif_error( "input '" + s + "' declared twice" );
  for ( auto const& s : n.inputs )
    if ( defined.count( s ) )
      throw blif_error( "input '" + s + "' is also driven by .names", defined[s] );
  for ( auto const& c : covers )
  {
    std::size_t total = 0;
    for ( auto k : c.cliques )
      total += k;
    if ( !c.cliques.empty() && total != c.cubes.size() )
      throw blif_error( "#.cliques sizes do not add up for '" + c.output + "'" );
  }
  for ( auto const& s : n.outputs )
    if ( !seen.count( s ) && !defined.count( s ) )
      throw blif_error( "output '" + s + "' is never driven" );
  n.covers = dependency_order( std::move( covers ), n.inputs, cover_lines );
  return n;
}

std::string write_blif( BlifNetlist const& n )
{
  std::ostringstream os;
  os << ".model " << n.model << "\n.inputs";
  for ( auto const& s : n.inputs )
    os << ' ' << s;
  os << "\n.outputs";
  for ( auto const& s : n.outputs )
    os << ' ' << s;
  os << '\n';
  for ( auto const& c : n.covers )
  {
    os << ".names";
    for ( auto const& s : c.inputs )
      os << ' ' << s;
    os << ' ' << c.output << '\n';
    if ( !c.cliques.empty() )
    {
      os << "#.cliques";
      for ( auto k : c.cliques )
        os << ' ' << k;
      os << '\n';
    }
    for ( auto const& cube : c.cubes )
      os << ( c.inputs.empty() ? "" : cube.to_string() + " " ) << "1\n";
  }
  os << ".end\n";
  return os.str();
}

bool mutually_exclusive( Cube const& a, Cube const& b )
{
  if ( a.lits.size() != b.lits.size() )
    throw blif_error( "cubes of different arity" );
  for ( std::size_t i = 0; i < a.lits.size(); ++i )
    if ( ( a.lits[i] == Literal::zero && b.lits[i] == Literal::one ) ||
         ( a.lits[i] == Literal::one && b.lits[i] == Literal::zero ) )
      return true;
  return false;
}

std::vector<std::vector<std::size_t>> clique_cover( std::vector<Cube> const& cubes )
{
  std::vector<std::vector<std::size_t>> cliques;
  for ( std::size_t i = 0; i < cubes.size(); ++i )
  {
    auto fits = [&]( auto const& clique ) {
      return std::all_of( clique.begin(), clique.end(), [&]( auto j ) { return mutually_exclusive( cubes[i], cubes[j] ); } );
    };
    auto it = std::find_if( cliques.begin(), cliques.end(), fits );
    if ( it == cliques.end() )
      cliques.push_back( { i } );
    else
      it->push_back( i );
  }
  return cliques;
}

BlifNetlist reorder_blif( BlifNetlist const& n )
{
  auto r = n;
  for ( auto& c : r.covers )
  {
    auto cliques = clique_cover( c.cubes );
    std::stable_sort( cliques.begin(), cliques.end(), []( auto const& a, auto const& b ) { return a.size() < b.size(); } );
    std::vector<Cube> cubes;
    c.cliques.clear();
    for ( auto const& q : cliques )
    {
      for ( std::size_t x = 0; x < q.size(); ++x )
        for ( std::size_t y = x + 1; y < q.size(); ++y )
          if ( !mutually_exclusive( c.cubes[q[x]], c.cubes[q[y]] ) )
            throw std::logic_error( "clique cover produced a non-exclusive pair" );
      for ( auto i : q )
        cubes.push_back( c.cubes[i] );
      c.cliques.push_back( q.size() );
    }
    c.cubes = std::move( cubes );
  }
  return r;
}

namespace
{

bool cube_holds( Cube const& cube, std::vector<bool> const& in )
{
  for ( std::size_t i = 0; i < cube.lits.size(); ++i )
    if ( ( cube.lits[i] == Literal::one && !in[i] ) || ( cube.lits[i] == Literal::zero && in[i] ) )
      return false;
  return true;
}

} // namespace

BitVector evaluate_blif( BlifNetlist const& n, BitVector const& inputs )
{
  if ( inputs.size() != n.inputs.size() )
    throw blif_error( "expected " + std::to_string( n.inputs.size() ) + " input bits" );
  std::map<std::string, bool> value;
  for ( std::size_t i = 0; i < n.inputs.size(); ++i )
    value[n.inputs[i]] = inputs.get( i );
  for ( auto const& c : n.covers )
  {
    std::vector<bool> in;
    for ( auto const& s : c.inputs )
      in.push_back( value.at( s ) );
    value[c.output] = std::any_of( c.cubes.begin(), c.cubes.end(), [&]( auto const& cube ) { return cube_holds( cube, in ); } );
  }
  BitVector out( n.outputs.size() );
  for ( std::size_t i = 0; i < n.outputs.size(); ++i )
    out.set( i, value.at( n.outputs[i] ) );
  return out;
}

FlatProgram lower_to_flat( BlifNetlist const& n )
{
  FlatProgram p;
  std::map<std::string, Loc> loc;
  for ( auto const& s : n.inputs )
  {
    loc[s] = p.num_locs;
    p.inputs.push_back( { s, false, { p.num_locs++ } } );
  }
  auto assign = [&]( BoolExp e ) {
    auto l = p.num_locs++;
    p.stmts.push_back( { FlatKind::assign, l, std::move( e ) } );
    return l;
  };
  for ( auto const& c : n.covers )
  {
    auto literal_and = [&]( Cube const& cube ) {
      std::vector<BoolExp> lits;
      for ( std::size_t i = 0; i < cube.lits.size(); ++i )
        if ( cube.lits[i] != Literal::dont_care )
        {
          auto v = make_var( loc.at( c.inputs[i] ) );
          lits.push_back( cube.lits[i] == Literal::one ? v : make_not( v ) );
        }
      return make_and( std::move( lits ) );
    };
    auto sizes = c.cliques;
    if ( sizes.empty() )
      sizes.assign( c.cubes.size(), 1 );
    std::vector<BoolExp> groups;
    std::size_t next = 0;
    for ( auto k : sizes )
    {
      std::vector<BoolExp> terms;
      for ( std::size_t j = 0; j < k; ++j )
        terms.push_back( literal_and( c.cubes[next++] ) );
      auto g = make_xor( std::move( terms ) );
      // A compound group needs a wire of its own to act as an AND control.
      if ( sizes.size() > 1 && !g.is_literal() && !g.is_const() )
        g = make_var( assign( std::move( g ) ) );
      groups.push_back( std::move( g ) );
    }
    BoolExp value;
    if ( groups.empty() )
      value = make_const( false );
    else if ( groups.size() == 1 )
      value = std::move( groups[0] );
    else
    {
      std::vector<BoolExp> negated;
      for ( auto& g : groups )
        negated.push_back( make_not( std::move( g ) ) );
      value = make_not( make_and( std::move( negated ) ) );
    }
    loc[c.output] = assign( std::move( value ) );
  }
  for ( auto const& s : n.outputs )
    p.outputs.push_back( { false, false, loc.at( s ) } );
  return p;
}

Mdd lower( BlifNetlist const& n )
{
  return build_mdd( lower_to_flat( n ) );
}

} // namespace revs
