#include "dgnn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dgnn {

double Box::measure() const {
  double m = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (hi[a] > lo[a]) m *= hi[a] - lo[a];
  }
  return m;
}

Point Box::center() const {
  Point c{};
  for (int a = 0; a < dim; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
  return c;
}

bool Box::contains(const Point& x, double slack) const {
  for (int a = 0; a < dim; ++a) {
    if (x[a] < lo[a] - slack || x[a] > hi[a] + slack) return false;
  }
  return true;
}

Box Box::scaled(double factor, unsigned axes_mask) const {
  Box b = *this;
  for (int a = 0; a < dim; ++a) {
    if (!(axes_mask & (1u << a))) continue;
    const double c = 0.5 * (lo[a] + hi[a]);
    const double half = 0.5 * factor * (hi[a] - lo[a]);
    b.lo[a] = c - half;
    b.hi[a] = c + half;
  }
  return b;
}

const char* to_string(FaceCategory c) {
  switch (c) {
    case FaceCategory::InteriorTimeLike: return "interior-time-like";
    case FaceCategory::InteriorSpaceLike: return "interior-space-like";
    case FaceCategory::Boundary: return "boundary";
    case FaceCategory::Initial: return "initial";
    case FaceCategory::Terminal: return "terminal";
  }
  return "?";
}

double Face::measure() const {
  double m = 1.0;
  for (int a = 0; a < box.dim; ++a) {
    if (a != axis) m *= box.width(a);
  }
  return m;
}

double Face::outward_sign(int side) const {
  if (interior()) return side == 0 ? 1.0 : -1.0;
  return normal[axis];
}

Point Face::outward_normal(int side) const {
  Point n{};
  n[axis] = outward_sign(side);
  return n;
}

Mesh::Mesh(const Box& domain, const std::vector<int>& cells_per_axis, std::optional<int> time_axis)
    : domain_(domain), cells_(cells_per_axis), time_axis_(time_axis) {
  const int d = domain.dim;
  if (d < 1 || d > kMaxDim) throw InputError("mesh dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (static_cast<int>(cells_.size()) != d) throw InputError("cells_per_axis must have one entry per axis");
  for (int a = 0; a < d; ++a) {
    if (cells_[a] < 1) throw InputError("cell count along axis " + std::to_string(a) + " must be >= 1");
    if (!(domain.hi[a] > domain.lo[a])) throw InputError("degenerate interval along axis " + std::to_string(a));
  }
  if (time_axis_ && (*time_axis_ < 0 || *time_axis_ >= d)) throw InputError("time axis out of range");

  std::array<double, kMaxDim> hw{};
  int total = 1;
  for (int a = 0; a < d; ++a) {
    hw[a] = domain.width(a) / cells_[a];
    total *= cells_[a];
  }

  // Elements, axis 0 fastest. Grid lines are computed from integer indices so
  // neighboring boxes share bit-identical coordinates.
  auto coord = [&](int a, int i) {
    return i == cells_[a] ? domain.hi[a] : domain.lo[a] + i * hw[a];
  };
  elements_.resize(total);
  for (int k = 0; k < total; ++k) {
    Element& e = elements_[k];
    e.box.dim = d;
    int rem = k;
    for (int a = 0; a < d; ++a) {
      e.cell[a] = rem % cells_[a];
      rem /= cells_[a];
      e.box.lo[a] = coord(a, e.cell[a]);
      e.box.hi[a] = coord(a, e.cell[a] + 1);
    }
    e.faces.assign(2 * d, -1);
  }

  // Faces: for each axis, each grid plane, each cell of the remaining axes.
  for (int axis = 0; axis < d; ++axis) {
    const bool is_time = time_axis_ && *time_axis_ == axis;
    std::array<int, kMaxDim> extent{};
    int nfaces_plane = 1;
    for (int a = 0; a < d; ++a) {
      extent[a] = (a == axis) ? cells_[a] + 1 : cells_[a];
      nfaces_plane *= extent[a];
    }
    for (int idx = 0; idx < nfaces_plane; ++idx) {
      std::array<int, kMaxDim> pos{};
      int rem = idx;
      for (int a = 0; a < d; ++a) {
        pos[a] = rem % extent[a];
        rem /= extent[a];
      }
      Face f;
      f.axis = axis;
      f.box.dim = d;
      for (int a = 0; a < d; ++a) {
        if (a == axis) {
          f.box.lo[a] = f.box.hi[a] = coord(a, pos[a]);
        } else {
          f.box.lo[a] = coord(a, pos[a]);
          f.box.hi[a] = coord(a, pos[a] + 1);
        }
      }
      const int plane = pos[axis];
      std::array<int, kMaxDim> lower = pos, upper = pos;
      lower[axis] = plane - 1;
      const int fid = static_cast<int>(faces_.size());
      if (plane == 0 || plane == cells_[axis]) {
        const bool low_end = plane == 0;
        const std::array<int, kMaxDim>& cell = low_end ? upper : lower;
        f.neighbors[0] = element_index(cell);
        f.num_neighbors = 1;
        f.normal[axis] = low_end ? -1.0 : 1.0;
        if (is_time) {
          f.category = low_end ? FaceCategory::Initial : FaceCategory::Terminal;
        } else {
          f.category = FaceCategory::Boundary;
        }
        elements_[f.neighbors[0]].faces[2 * axis + (low_end ? 0 : 1)] = fid;
      } else {
        f.neighbors[0] = element_index(lower);
        f.neighbors[1] = element_index(upper);
        f.num_neighbors = 2;
        f.normal[axis] = 1.0;
        f.category = is_time ? FaceCategory::InteriorSpaceLike : FaceCategory::InteriorTimeLike;
        elements_[f.neighbors[0]].faces[2 * axis + 1] = fid;
        elements_[f.neighbors[1]].faces[2 * axis] = fid;
      }
      faces_.push_back(f);
    }
  }
}

int Mesh::element_index(const std::array<int, kMaxDim>& cell) const {
  int k = 0;
  int stride = 1;
  for (int a = 0; a < dim(); ++a) {
    k += cell[a] * stride;
    stride *= cells_[a];
  }
  return k;
}

double Mesh::h() const {
  double m = 0.0;
  for (int a = 0; a < dim(); ++a) m = std::max(m, h(a));
  return m;
}

int Mesh::count(FaceCategory c) const {
  return static_cast<int>(std::count_if(faces_.begin(), faces_.end(),
                                        [c](const Face& f) { return f.category == c; }));
}

Mesh build_mesh(const std::vector<std::pair<double, double>>& bounds, const std::vector<int>& cells_per_axis,
                std::optional<int> time_axis) {
  if (bounds.empty() || bounds.size() > static_cast<size_t>(kMaxDim)) throw InputError("unsupported mesh dimension");
  Box b;
  b.dim = static_cast<int>(bounds.size());
  for (int a = 0; a < b.dim; ++a) {
    b.lo[a] = bounds[a].first;
    b.hi[a] = bounds[a].second;
  }
  return Mesh(b, cells_per_axis, time_axis);
}

namespace {
void require_interior(const Face& face) {
  if (!face.interior()) throw InputError(std::string("jump requested on a ") + to_string(face.category) + " face");
}
}  // namespace

std::array<Complex, kMaxDim> normal_jump(const Face& face, Complex w1, Complex w2) {
  require_interior(face);
  std::array<Complex, kMaxDim> j{};
  j[face.axis] = w1 * face.outward_sign(0) + w2 * face.outward_sign(1);
  return j;
}

Complex normal_jump(const Face& face, const std::array<Complex, kMaxDim>& tau1,
                    const std::array<Complex, kMaxDim>& tau2) {
  require_interior(face);
  return tau1[face.axis] * face.outward_sign(0) + tau2[face.axis] * face.outward_sign(1);
}

Complex time_jump(const Face& face, Complex w_minus, Complex w_plus) {
  require_interior(face);
  if (face.category != FaceCategory::InteriorSpaceLike) throw InputError("time jump requires a space-like face");
  return (w_minus - w_plus) * face.normal[face.axis];
}

}  // namespace dgnn
