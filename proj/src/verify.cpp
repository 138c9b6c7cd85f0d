#include <revs/verify.hpp>

#include <random>

namespace revs
{

namespace
{

constexpr std::size_t max_examples = 5;

std::string bits_of( std::vector<std::uint64_t> const& lanes, std::vector<Wire> const& wires, std::size_t lane )
{
  std::string s;
  for ( auto w : wires )
    s += ( ( lanes[w] >> lane ) & 1u ) ? '1' : '0';
  return s;
}

} // namespace

VerifyReport verify( Circuit const& c, Reference const& reference, std::size_t samples, std::uint64_t seed )
{
  VerifyReport r;
  r.seed = seed;
  auto const n = c.num_inputs;
  r.exhaustive = n < 63 && ( std::uint64_t{ 1 } << n ) <= samples;
  r.samples = r.exhaustive ? std::size_t{ 1 } << n : samples;

  enum Role : std::uint8_t { ancilla, input, output };
  std::vector<Role> role( c.width, ancilla );
  std::vector<Wire> input_wires;
  for ( Wire w = 0; w < n; ++w )
  {
    role[w] = input;
    input_wires.push_back( w );
  }
  for ( auto w : c.outputs )
    role[w] = output;

  std::mt19937_64 rng( seed );
  std::vector<std::uint64_t> lanes( c.width );
  for ( std::size_t base = 0; base < r.samples; base += 64 )
  {
    auto const count = std::min<std::size_t>( 64, r.samples - base );
    std::fill( lanes.begin(), lanes.end(), 0 );
    std::vector<BitVector> in( count, BitVector( n ) );
    for ( std::size_t j = 0; j < count; ++j )
      for ( std::size_t i = 0; i < n; ++i )
      {
        bool bit = r.exhaustive ? ( ( base + j ) >> i ) & 1u : rng() & 1u;
        in[j].set( i, bit );
        if ( bit )
          lanes[i] |= std::uint64_t{ 1 } << j;
      }
    simulate_lanes( c.gates, lanes );

    for ( std::size_t j = 0; j < count; ++j )
    {
      auto expected = reference( in[j] );
      std::string what;
      for ( std::size_t k = 0; k < c.outputs.size() && what.empty(); ++k )
        if ( ( ( lanes[c.outputs[k]] >> j ) & 1u ) != expected.get( k ) )
        {
          what = "outputs";
          r.outputs_match = false;
        }
      for ( Wire w = 0; w < c.width; ++w )
      {
        bool bit = ( lanes[w] >> j ) & 1u;
        if ( role[w] == input && bit != in[j].get( w ) )
        {
          r.inputs_preserved = false;
          if ( what.empty() )
            what = "inputs not preserved";
        }
        else if ( role[w] == ancilla && bit )
        {
          r.ancillas_zero = false;
          if ( what.empty() )
            what = "ancilla not zero";
        }
      }
      if ( what.empty() )
        continue;
      ++r.mismatches;
      if ( r.examples.size() < max_examples )
        r.examples.push_back( { base + j, in[j].to_string(), expected.to_string(), bits_of( lanes, c.outputs, j ), what } );
    }
  }
  return r;
}

VerifyReport verify( FlatProgram const& p, Circuit const& c, std::size_t samples, std::uint64_t seed )
{
  if ( p.num_input_bits() != c.num_inputs )
    throw circuit_error( "circuit has " + std::to_string( c.num_inputs ) + " inputs, program has " +
                         std::to_string( p.num_input_bits() ) );
  return verify( c, [&]( BitVector const& u ) { return interpret( p, u ); }, samples, seed );
}

} // namespace revs
