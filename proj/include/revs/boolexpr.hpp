#pragma once

#include <revs/ancilla_heap.hpp>
#include <revs/circuit.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace revs
{

enum class ExprKind : std::uint8_t
{
  var,
  constant,
  not_,
  and_,
  xor_
};

/*! \brief AND/XOR/NOT expression over numbered variables.
 *
 * Use the `make_*` builders: they flatten nested AND/XOR, fold constants and
 * hoist negations out of XOR lists, so structurally equal expressions compare
 * equal.  What a variable number means (wire, location, version) is up to
 * the user.
 */
struct BoolExp
{
  ExprKind kind = ExprKind::constant;
  std::uint32_t var = 0;
  bool value = false;
  std::vector<BoolExp> children;

  bool operator==( BoolExp const& ) const = default;

  bool is_var() const { return kind == ExprKind::var; }
  bool is_const() const { return kind == ExprKind::constant; }
  /// Var or Not(Var).
  bool is_literal() const { return is_var() || ( kind == ExprKind::not_ && children[0].is_var() ); }
};

BoolExp make_var( std::uint32_t v );
BoolExp make_const( bool b );
BoolExp make_not( BoolExp e );
BoolExp make_and( std::vector<BoolExp> children );
BoolExp make_xor( std::vector<BoolExp> children );
BoolExp make_or( BoolExp a, BoolExp b );

class expr_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Throws expr_error if `env` has no value for a variable.
bool eval( BoolExp const& e, std::function<bool( std::uint32_t )> const& env );

void collect_vars( BoolExp const& e, std::vector<std::uint32_t>& out );
bool mentions( BoolExp const& e, std::uint32_t v );
BoolExp rename( BoolExp const& e, std::function<std::uint32_t( std::uint32_t )> const& f );

/// Toffoli gates `synthesize` emits for `e`.
std::size_t and_cost( BoolExp const& e );

/*! \brief Emits gates mapping target y to y XOR e.
 *
 * Variables of `e` are wire indices.  Ancillas come from `heap` and are back
 * at zero and released when the sequence ends; variables are left unchanged
 * (a negated AND operand is flipped in place and flipped back).
 */
void synthesize( BoolExp const& e, Wire target, AncillaHeap& heap, std::vector<Gate>& out );

/// Peak number of heap ancillas `synthesize` holds at once for `e`.
std::size_t ancilla_need( BoolExp const& e );

std::string to_string( BoolExp const& e, std::function<std::string( std::uint32_t )> const& name );

} // namespace revs
