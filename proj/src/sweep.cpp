#include "weyldens/sweep.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace weyldens::sweep {

std::vector<Row> run(const BoundaryParam& bp, double eps, const Grid& grid, double c2, double kernel_rel,
                     unsigned threads) {
  if (grid.n == 0) fail(ErrorCode::InvalidArgument, "sweep needs at least one grid point");
  if (!(grid.lmin <= grid.lmax) || !(grid.lmax < 0.0)) {
    std::ostringstream msg;
    msg << "sweep range must satisfy lmin <= lmax < 0, got [" << grid.lmin << ", " << grid.lmax << "]";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  if (!(eps > 0.0)) fail(ErrorCode::DomainError, "sweep needs eps > 0");

  std::vector<Row> rows(grid.n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Row& row = rows[i];
      row.lambda = grid.at(i);
      row.region = density::thm2_region(bp, row.lambda, eps, c2);
      try {
        row.rho_prime = density::rho_prime(bp, row.lambda, eps, c2, kernel_rel).rho_prime;
      } catch (const Error& e) {
        row.error = e.code();
      }
    }
  };

  unsigned count = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  count = static_cast<unsigned>(std::min<std::size_t>(count, grid.n));
  if (count <= 1) {
    work(0, grid.n);
    return rows;
  }
  std::vector<std::jthread> pool;
  pool.reserve(count);
  const std::size_t chunk = (grid.n + count - 1) / count;
  for (unsigned t = 0; t < count; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(grid.n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  pool.clear();  // joins
  return rows;
}

}  // namespace weyldens::sweep
