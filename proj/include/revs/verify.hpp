#pragma once

#include <revs/circuit.hpp>
#include <revs/frontend.hpp>

#include <functional>
#include <string>
#include <vector>

namespace revs
{

struct Mismatch
{
  std::size_t sample;
  std::string input;    ///< input bits, wire 0 first
  std::string expected; ///< output bits
  std::string actual;
  std::string what;     ///< "outputs", "inputs not preserved" or "ancilla not zero"
};

struct VerifyReport
{
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::size_t mismatches = 0;
  bool outputs_match = true;
  bool inputs_preserved = true;
  bool ancillas_zero = true;
  /// At most the first few failing samples.
  std::vector<Mismatch> examples;

  bool ok() const { return mismatches == 0; }
};

using Reference = std::function<BitVector( BitVector const& )>;

/*! \brief Random-sample check of `c` against `reference`.
 *
 * Each sample runs the circuit on (u, 0...).  Output wires must carry
 * reference(u), input wires that are not outputs must still hold u, and
 * every other wire must be zero.  When 2^inputs does not exceed `samples`
 * every input is tried instead.
 */
VerifyReport verify( Circuit const& c, Reference const& reference, std::size_t samples, std::uint64_t seed );

/// verify() with the flat-program interpreter as reference.
VerifyReport verify( FlatProgram const& p, Circuit const& c, std::size_t samples, std::uint64_t seed );

} // namespace revs
