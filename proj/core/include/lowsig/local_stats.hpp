#pragma once

#include "lowsig/grid.hpp"

namespace lowsig {

struct LocalStats {
  SinogramGrid mean;
  SinogramGrid std;
};

/// Mean over the window clipped to the grid (windows shrink at the edges).
SinogramGrid local_mean(const SinogramGrid& grid, const WindowSpec& w);

/// Sample (n-1) standard deviation over the clipped window; 0 where the
/// clipped window holds a single cell.
SinogramGrid local_std(const SinogramGrid& grid, const WindowSpec& w);

/// Both statistics in one sweep. Outputs keep the input stage tag.
LocalStats local_stats(const SinogramGrid& grid, const WindowSpec& w);

}  // namespace lowsig
