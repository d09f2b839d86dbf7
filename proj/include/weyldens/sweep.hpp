#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "weyldens/density.hpp"
#include "weyldens/error.hpp"

namespace weyldens::sweep {

struct Grid {
  double lmin = 0.0;
  double lmax = 0.0;
  std::size_t n = 0;

  /// Point i of an evenly spaced grid including both ends (n = 1 gives lmin).
  double at(std::size_t i) const noexcept {
    if (n <= 1) return lmin;
    if (i + 1 == n) return lmax;
    return lmin + (lmax - lmin) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

struct Row {
  double lambda = 0.0;
  ScaledReal rho_prime;
  Region region = Region::Gap;
  std::optional<ErrorCode> error;
};

/// Evaluates rho' on the grid. Rows come back in grid order whatever the
/// thread count; threads = 0 uses std::thread::hardware_concurrency().
/// A failing point is reported in its row instead of aborting the sweep.
std::vector<Row> run(const BoundaryParam& bp, double eps, const Grid& grid, double c2 = Constants{}.c2,
                     double kernel_rel = kernel::kDefaultTol, unsigned threads = 1);

}  // namespace weyldens::sweep
