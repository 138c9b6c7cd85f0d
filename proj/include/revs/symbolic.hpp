#pragma once

#include <revs/boolexpr.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace revs
{

using ValueId = std::uint32_t;

/*! \brief Hash-consed symbolic Boolean values.
 *
 * A value is a set of atoms read as their XOR; an atom is an input bit, the
 * constant 1, or an AND of other values.  Same id implies same function.
 * The converse does not hold: AND is never distributed over XOR, so some
 * equal functions get different ids.
 */
class ValueTable
{
public:
  ValueTable();

  static constexpr ValueId zero() { return 0; }
  ValueId one() const { return one_; }
  ValueId input( std::uint32_t index );

  ValueId xor_( ValueId a, ValueId b );
  ValueId not_( ValueId a ) { return xor_( a, one_ ); }
  ValueId and_( std::vector<ValueId> operands );

  /// Value of `e` when each variable v has value `var_value(v)`.
  ValueId of( BoolExp const& e, std::function<ValueId( std::uint32_t )> const& var_value );

  /// Concrete value under an assignment of the input bits.
  bool evaluate( ValueId v, std::function<bool( std::uint32_t )> const& input_bit ) const;

  std::size_t size() const { return values_.size(); }

private:
  using AtomId = std::uint32_t;
  struct Atom
  {
    enum class Kind : std::uint8_t { one, input, and_ } kind;
    std::uint32_t input = 0;
    std::vector<ValueId> operands;
    auto operator<=>( Atom const& ) const = default;
  };

  AtomId intern_atom( Atom a );
  ValueId intern_value( std::vector<AtomId> atoms );
  /// Lookup without creating; returns false if absent.
  bool find_xor( ValueId a, ValueId b, ValueId& out ) const;

  std::vector<Atom> atoms_;
  std::map<Atom, AtomId> atom_index_;
  std::vector<std::vector<AtomId>> values_;
  std::map<std::vector<AtomId>, ValueId> value_index_;
  ValueId one_ = 0;
};

} // namespace revs
