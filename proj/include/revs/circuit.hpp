#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace revs
{

using Wire = std::uint32_t;

/*! \brief Fixed-length bit vector packed into 64-bit words. */
class BitVector
{
public:
  BitVector() = default;
  explicit BitVector( std::size_t size ) : size_( size ), words_( ( size + 63 ) / 64, 0u ) {}

  static BitVector from_string( std::string const& bits );

  std::size_t size() const { return size_; }
  bool get( std::size_t i ) const { return ( words_[i >> 6] >> ( i & 63 ) ) & 1u; }
  void set( std::size_t i, bool value )
  {
    auto const mask = std::uint64_t{ 1 } << ( i & 63 );
    if ( value )
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  void flip( std::size_t i ) { words_[i >> 6] ^= std::uint64_t{ 1 } << ( i & 63 ); }

  std::string to_string() const;
  bool operator==( BitVector const& ) const = default;

private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class GateKind : std::uint8_t
{
  toffoli,
  cnot,
  not_
};

struct Gate
{
  GateKind kind;
  Wire control1 = 0;
  Wire control2 = 0;
  Wire target = 0;

  static Gate toffoli( Wire c1, Wire c2, Wire t ) { return { GateKind::toffoli, c1, c2, t }; }
  static Gate cnot( Wire c, Wire t ) { return { GateKind::cnot, c, 0, t }; }
  static Gate not_gate( Wire t ) { return { GateKind::not_, 0, 0, t }; }

  bool operator==( Gate const& ) const = default;
};

class circuit_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Toffoli network over `width` wires.
 *
 * Wires `0 .. num_inputs-1` carry the primary inputs.  Every other wire
 * starts at zero.  `outputs` lists the wires holding the result bits after
 * the last gate, in result order.
 */
struct Circuit
{
  std::size_t width = 0;
  std::size_t num_inputs = 0;
  std::vector<Wire> outputs;
  std::vector<Gate> gates;

  /// Throws circuit_error on out-of-range wires, repeated controls or duplicate outputs.
  void validate() const;

  bool operator==( Circuit const& ) const = default;
};

struct CircuitStats
{
  std::size_t toffoli_count = 0;
  std::size_t cnot_count = 0;
  std::size_t not_count = 0;
  std::size_t qubit_count = 0;

  bool operator==( CircuitStats const& ) const = default;
};

CircuitStats stats( Circuit const& c );

void apply_gate( Gate const& g, BitVector& bits );

/// Runs every gate in order; `input` must have exactly `c.width` bits.
BitVector simulate( Circuit const& c, BitVector input );

/// Bit-sliced simulation: each wire carries 64 independent samples.
void simulate_lanes( std::span<Gate const> gates, std::span<std::uint64_t> lanes );

/// Gate order reversed; every gate is self-inverse, so this is the inverse circuit.
Circuit reverse( Circuit const& c );

std::vector<Gate> reversed_gates( std::span<Gate const> gates );

void write_circuit( std::ostream& os, Circuit const& c );
Circuit read_circuit( std::istream& is );

} // namespace revs
