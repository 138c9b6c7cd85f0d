#pragma once

#include <revs/circuit.hpp>

#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

namespace revs
{

/*! \brief Pool of zero wires that always hands out the lowest free index.
 *
 * Fresh wires are numbered from `base` upwards; released wires go back into
 * a min-heap and are preferred over fresh ones.
 */
class AncillaHeap
{
public:
  explicit AncillaHeap( Wire base = 0 ) : base_( base ), next_( base ) {}

  Wire alloc()
  {
    Wire w;
    if ( !free_.empty() )
    {
      w = free_.top();
      free_.pop();
    }
    else
    {
      w = next_++;
    }
    live_.insert( w );
    return w;
  }

  void release( Wire w )
  {
    if ( live_.erase( w ) == 0 )
      throw std::logic_error( "release of wire " + std::to_string( w ) + " that is not allocated" );
    free_.push( w );
  }

  bool is_allocated( Wire w ) const { return live_.contains( w ); }
  std::size_t live_count() const { return live_.size(); }
  std::size_t high_water() const { return next_ - base_; }
  Wire base() const { return base_; }
  /// One past the highest wire ever handed out.
  Wire end() const { return next_; }

private:
  Wire base_;
  Wire next_;
  std::priority_queue<Wire, std::vector<Wire>, std::greater<>> free_;
  std::unordered_set<Wire> live_;
};

} // namespace revs
