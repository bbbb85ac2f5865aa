#pragma once

// Periodic super-cell grid (1 or 2 space dimensions) and cell-average
// fields on it.  The super-cell stands in for full space: box-average
// functionals become exact grid means.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace apde {

struct GridSpec {
  int dims = 1;
  std::vector<double> lengths;  // L per axis
  std::vector<int> cells;       // N per axis, >= 4

  GridSpec() = default;
  GridSpec(int d, std::vector<double> L, std::vector<int> N)
      : dims(d), lengths(std::move(L)), cells(std::move(N)) {
    validate();
  }

  void validate() const {
    if (dims != 1 && dims != 2)
      throw std::invalid_argument("GridSpec: dims must be 1 or 2");
    if (static_cast<int>(lengths.size()) != dims ||
        static_cast<int>(cells.size()) != dims)
      throw std::invalid_argument("GridSpec: lengths/cells must match dims");
    for (double l : lengths)
      if (!(l > 0.0)) throw std::invalid_argument("GridSpec: lengths must be > 0");
    for (int n : cells)
      if (n < 4) throw std::invalid_argument("GridSpec: need >= 4 cells per axis");
  }

  double dx(int axis) const { return lengths[axis] / cells[axis]; }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int c : cells) n *= static_cast<std::size_t>(c);
    return n;
  }

  bool operator==(const GridSpec& o) const {
    return dims == o.dims && lengths == o.lengths && cells == o.cells;
  }
};

/// Cell-average state, row-major with axis 0 slowest.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(GridSpec g, double fill = 0.0)
      : grid(std::move(g)), values(grid.cell_count(), fill) {}

  double& at(std::size_t i0) { return values[i0]; }
  double at(std::size_t i0) const { return values[i0]; }
  double& at(std::size_t i0, std::size_t i1) {
    return values[i0 * grid.cells[1] + i1];
  }
  double at(std::size_t i0, std::size_t i1) const {
    return values[i0 * grid.cells[1] + i1];
  }

  double mean() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
  }

  double mean_abs_deviation(double center) const {
    double acc = 0.0;
    for (double v : values) acc += std::abs(v - center);
    return acc / static_cast<double>(values.size());
  }

  /// Grid mean of u^2 (the squared normalized L2 norm).
  double second_moment() const {
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return acc / static_cast<double>(values.size());
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace apde
