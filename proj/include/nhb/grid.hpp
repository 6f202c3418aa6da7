#pragma once

#include "nhb/types.hpp"

namespace nhb {

/// One discretized axis of a parameter region. Periodic axes exclude the
/// endpoint (coordinates min + i*(max-min)/size); open axes include it.
struct GridAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int size = 2;
  bool periodic = false;

  double spacing() const {
    return periodic ? (max - min) / size : (max - min) / (size - 1);
  }
  double coord(int i) const { return min + i * spacing(); }
};

struct ParamGrid {
  std::vector<GridAxis> axes;

  int rank() const { return static_cast<int>(axes.size()); }

  long num_points() const {
    long n = 1;
    for (const auto& a : axes) n *= a.size;
    return n;
  }

  /// Row-major flat index: the last axis varies fastest.
  long flat_index(const std::vector<int>& idx) const {
    long f = 0;
    for (size_t k = 0; k < axes.size(); ++k) f = f * axes[k].size + idx[k];
    return f;
  }

  std::vector<int> unflatten(long flat) const {
    std::vector<int> idx(axes.size());
    for (int k = rank() - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(flat % axes[k].size);
      flat /= axes[k].size;
    }
    return idx;
  }

  Point point(const std::vector<int>& idx) const {
    Point p(axes.size());
    for (size_t k = 0; k < axes.size(); ++k) p[k] = axes[k].coord(idx[k]);
    return p;
  }

  Point point(long flat) const { return point(unflatten(flat)); }

  void validate() const {
    require(!axes.empty(), ErrorKind::ValidationError, "grid has no axes");
    for (const auto& a : axes) {
      require(a.size >= 2, ErrorKind::ValidationError,
              "grid axis '" + a.name + "' needs size >= 2");
      require(a.max > a.min, ErrorKind::ValidationError,
              "grid axis '" + a.name + "' needs max > min");
    }
  }
};

struct ParamPath {
  std::vector<Point> pts;
  // Closed paths revisit their starting configuration at the last node; the
  // coordinates may differ by a full period of a winding axis.
  bool closed = false;

  void validate() const {
    require(pts.size() >= 2, ErrorKind::ValidationError, "path needs >= 2 points");
    for (const auto& p : pts)
      require(p.size() == pts.front().size(), ErrorKind::ValidationError,
              "path point dims differ");
  }
};

/// Uniformly sampled single-axis segment at fixed values of the other axes.
ParamPath axis_segment(const Point& base, int axis, double from, double to,
                       int n_points, bool closed);

}  // namespace nhb
