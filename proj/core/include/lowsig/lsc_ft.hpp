#pragma once

#include "lowsig/grid.hpp"

namespace lowsig::ft {

struct FtConfig {
  double lower_th = 20.0;
  double upper_th = 1.0e4;
  WindowSpec boxcar_window{3, 2, 1};  // 7x5x3
  WindowSpec median_window{1, 1, 1};  // 3x3x3
  bool upper_enabled = true;
  double floor = 1.0e-3;

  void validate() const;
};

/// Fixed-threshold low-signal correction: cells below lower_th get the
/// box-car mean of their window, cells above upper_th get the window median,
/// everything else passes through. Neighbourhoods always read the input grid.
/// The result is floored at cfg.floor.
SinogramGrid ft_lsc(const SinogramGrid& counts, const FtConfig& cfg);

}  // namespace lowsig::ft
