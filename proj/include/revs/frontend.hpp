#pragma once

#include <revs/boolexpr.hpp>
#include <revs/circuit.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace revs
{

/*! \brief Parse or flatten failure with a source position (1-based, 0 if unknown). */
class source_error : public std::runtime_error
{
public:
  source_error( std::string const& msg, int line = 0, int col = 0 )
      : std::runtime_error( line ? std::to_string( line ) + ":" + std::to_string( col ) + ": " + msg : msg ),
        line( line ), col( col ) {}
  int line;
  int col;
};

// ---------------------------------------------------------------------------
// Source AST

struct Expr;
using ExprPtr = std::shared_ptr<Expr const>;

enum class ExprTag : std::uint8_t
{
  bool_lit,
  int_lit,
  ident,
  index,     ///< args[0].[args[1]]
  slice,     ///< args[0].[args[1] .. args[2]]
  apply,     ///< name applied to args; builtins (not, rot, Array.*) included
  binary,    ///< name is the operator: && || <> + - * / %
  negate,    ///< unary minus on integers
  list,      ///< [a; b; ...]
  int_array  ///< [| 1; 2 |]
};

struct Expr
{
  ExprTag tag;
  int line = 0;
  int col = 0;
  std::string name;
  long long value = 0;
  std::vector<ExprPtr> args;
};

struct Stmt;
using Block = std::vector<Stmt>;

enum class StmtTag : std::uint8_t
{
  let,          ///< let [mutable] name params = body
  assign,       ///< name <- value
  index_assign, ///< name.[index] <- value
  for_,         ///< for name in lo .. hi do body
  clean,        ///< clean name  or  clean name.[index]
  expr          ///< expression statement; the last one in a block is its value
};

struct Stmt
{
  StmtTag tag;
  int line = 0;
  int col = 0;
  std::string name;
  bool is_mutable = false;
  std::vector<std::string> params;
  ExprPtr value;
  ExprPtr index;
  ExprPtr lo;
  ExprPtr hi;
  Block body;

  bool is_function() const { return tag == StmtTag::let && !params.empty(); }
};

struct SourceProgram
{
  Block items;
};

SourceProgram parse( std::string const& text );

/// Overrides for top-level integer bindings (`let n = 10`).
using ParamMap = std::map<std::string, long long>;

// ---------------------------------------------------------------------------
// Straight-line form

/// A location is one logical bit; Update statements mutate it in place.
using Loc = std::uint32_t;

struct FlatInput
{
  std::string name;
  bool is_array = false;
  std::vector<Loc> locs;
};

enum class FlatKind : std::uint8_t
{
  assign, ///< loc is fresh and zero; loc := expr
  update, ///< loc ^= expr, expr does not read loc
  clean   ///< loc is zero again and released
};

struct FlatStmt
{
  FlatKind kind;
  Loc loc = 0;
  BoolExp expr; ///< variables are locations
  bool operator==( FlatStmt const& ) const = default;
};

struct FlatOutput
{
  bool is_const = false;
  bool value = false;
  Loc loc = 0;
  bool operator==( FlatOutput const& ) const = default;
};

struct FlatProgram
{
  std::vector<FlatInput> inputs;
  std::vector<FlatStmt> stmts;
  std::vector<FlatOutput> outputs;
  std::uint32_t num_locs = 0;

  std::size_t num_input_bits() const;
  /// Input locations in register order.
  std::vector<Loc> input_locs() const;
  /// Display name of a location: `a.[3]`, `x`, or `tmp_K`.
  std::string loc_name( Loc l ) const;
};

bool structurally_equal( FlatProgram const& a, FlatProgram const& b );

FlatProgram flatten( SourceProgram const& program, ParamMap const& params = {} );

inline FlatProgram compile_source( std::string const& text, ParamMap const& params = {} )
{
  return flatten( parse( text ), params );
}

/// Evaluates the straight-line program.  Throws source_error when a cleaned
/// location is not zero or a location is read outside its lifetime.
BitVector interpret( FlatProgram const& p, BitVector const& inputs );

/*! \brief Direct AST interpreter, independent of `flatten`.
 *
 * Inputs are consumed in declaration order, the same order `flatten` uses.
 */
BitVector evaluate_source( SourceProgram const& program, BitVector const& inputs, ParamMap const& params = {} );

/// Prints `p` as DSL text that flattens back to `p`.
std::string to_source( FlatProgram const& p );

} // namespace revs
