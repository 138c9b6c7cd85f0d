#include <revs/symbolic.hpp>

#include <algorithm>
#include <iterator>
#include <unordered_map>

namespace revs
{

ValueTable::ValueTable()
{
  values_.push_back( {} );
  value_index_[{}] = 0;
  one_ = intern_value( { intern_atom( Atom{ Atom::Kind::one, 0, {} } ) } );
}

ValueTable::AtomId ValueTable::intern_atom( Atom a )
{
  auto it = atom_index_.find( a );
  if ( it != atom_index_.end() )
    return it->second;
  auto id = static_cast<AtomId>( atoms_.size() );
  atoms_.push_back( a );
  atom_index_.emplace( std::move( a ), id );
  return id;
}

ValueId ValueTable::intern_value( std::vector<AtomId> atoms )
{
  auto it = value_index_.find( atoms );
  if ( it != value_index_.end() )
    return it->second;
  auto id = static_cast<ValueId>( values_.size() );
  values_.push_back( atoms );
  value_index_.emplace( std::move( atoms ), id );
  return id;
}

ValueId ValueTable::input( std::uint32_t index )
{
  return intern_value( { intern_atom( Atom{ Atom::Kind::input, index, {} } ) } );
}

namespace
{

template<class T>
std::vector<T> symmetric_difference( std::vector<T> const& a, std::vector<T> const& b )
{
  std::vector<T> r;
  std::set_symmetric_difference( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( r ) );
  return r;
}

} // namespace

ValueId ValueTable::xor_( ValueId a, ValueId b )
{
  if ( a == 0 )
    return b;
  if ( b == 0 )
    return a;
  if ( a == b )
    return 0;
  return intern_value( symmetric_difference( values_[a], values_[b] ) );
}

bool ValueTable::find_xor( ValueId a, ValueId b, ValueId& out ) const
{
  auto it = value_index_.find( symmetric_difference( values_[a], values_[b] ) );
  if ( it == value_index_.end() )
    return false;
  out = it->second;
  return true;
}

ValueId ValueTable::and_( std::vector<ValueId> operands )
{
  std::vector<ValueId> ops;
  for ( auto v : operands )
  {
    if ( v == 0 )
      return 0;
    if ( v == one_ )
      continue;
    auto const& atoms = values_[v];
    if ( atoms.size() == 1 && atoms_[atoms[0]].kind == Atom::Kind::and_ )
    {
      auto const& inner = atoms_[atoms[0]].operands;
      ops.insert( ops.end(), inner.begin(), inner.end() );
    }
    else
      ops.push_back( v );
  }
  std::sort( ops.begin(), ops.end() );
  ops.erase( std::unique( ops.begin(), ops.end() ), ops.end() );
  for ( auto v : ops )
  {
    ValueId complement;
    if ( find_xor( v, one_, complement ) && std::binary_search( ops.begin(), ops.end(), complement ) )
      return 0;
  }
  if ( ops.empty() )
    return one_;
  if ( ops.size() == 1 )
    return ops[0];
  return intern_value( { intern_atom( Atom{ Atom::Kind::and_, 0, std::move( ops ) } ) } );
}

ValueId ValueTable::of( BoolExp const& e, std::function<ValueId( std::uint32_t )> const& var_value )
{
  switch ( e.kind )
  {
  case ExprKind::var: return var_value( e.var );
  case ExprKind::constant: return e.value ? one_ : 0;
  case ExprKind::not_: return not_( of( e.children[0], var_value ) );
  case ExprKind::xor_:
  {
    ValueId r = 0;
    for ( auto const& c : e.children )
      r = xor_( r, of( c, var_value ) );
    return r;
  }
  case ExprKind::and_:
  {
    std::vector<ValueId> ops;
    for ( auto const& c : e.children )
      ops.push_back( of( c, var_value ) );
    return and_( std::move( ops ) );
  }
  }
  return 0;
}

bool ValueTable::evaluate( ValueId v, std::function<bool( std::uint32_t )> const& input_bit ) const
{
  std::unordered_map<AtomId, bool> atom_memo;
  std::unordered_map<ValueId, bool> value_memo;
  auto value = [&]( auto&& self, ValueId id ) -> bool {
    if ( auto it = value_memo.find( id ); it != value_memo.end() )
      return it->second;
    bool r = false;
    for ( auto a : values_[id] )
    {
      bool bit;
      if ( auto it = atom_memo.find( a ); it != atom_memo.end() )
        bit = it->second;
      else
      {
        auto const& atom = atoms_[a];
        switch ( atom.kind )
        {
        case Atom::Kind::one: bit = true; break;
        case Atom::Kind::input: bit = input_bit( atom.input ); break;
        default:
          bit = true;
          for ( auto op : atom.operands )
            if ( !self( self, op ) )
            {
              bit = false;
              break;
            }
        }
        atom_memo[a] = bit;
      }
      r ^= bit;
    }
    value_memo[id] = r;
    return r;
  };
  return value( value, v );
}

} // namespace revs
