#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dgnn/types.hpp"

namespace dgnn {

/// Axis-aligned box in `dim` dimensions. A face is a box with lo == hi along
/// its normal axis.
struct Box {
  int dim = 0;
  Point lo{};
  Point hi{};

  double width(int axis) const { return hi[axis] - lo[axis]; }
  double measure() const;
  Point center() const;
  bool contains(const Point& x, double slack = 0.0) const;
  /// Scale every axis in `axes_mask` by `factor` about the center.
  Box scaled(double factor, unsigned axes_mask = ~0u) const;
};

enum class FaceCategory { InteriorTimeLike, InteriorSpaceLike, Boundary, Initial, Terminal };

const char* to_string(FaceCategory c);

struct Face {
  int axis = 0;  // normal direction
  Box box;
  FaceCategory category = FaceCategory::Boundary;
  // Interior faces: neighbors[0] is the lower-index cell along `axis` (K1),
  // neighbors[1] the upper one. Boundary-type faces use neighbors[0] only.
  std::array<int, 2> neighbors{-1, -1};
  int num_neighbors = 0;
  // Interior: unit vector from neighbors[0] into neighbors[1] (so n^t > 0 on
  // space-like faces). Boundary-type: outward from the domain.
  Point normal{};

  bool interior() const { return num_neighbors == 2; }
  double measure() const;
  /// Component along `axis` of the outward normal of neighbor `side`.
  double outward_sign(int side) const;
  Point outward_normal(int side) const;
};

struct Element {
  Box box;
  std::array<int, kMaxDim> cell{};
  std::vector<int> faces;  // 2*dim face indices, ordered (axis, low/high)
};

/// Tensor-product partition of a box with a classified skeleton. Immutable
/// after construction.
class Mesh {
 public:
  Mesh(const Box& domain, const std::vector<int>& cells_per_axis, std::optional<int> time_axis);

  int dim() const { return domain_.dim; }
  const Box& domain() const { return domain_; }
  const std::vector<int>& cells_per_axis() const { return cells_; }
  std::optional<int> time_axis() const { return time_axis_; }
  bool is_space_time() const { return time_axis_.has_value(); }
  bool is_time_axis(int a) const { return time_axis_ && *time_axis_ == a; }

  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const Element& element(int k) const { return elements_[k]; }
  const Face& face(int f) const { return faces_[f]; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// max per-axis element width
  double h() const;
  double h(int axis) const { return domain_.width(axis) / cells_[axis]; }
  int count(FaceCategory c) const;
  int element_index(const std::array<int, kMaxDim>& cell) const;

 private:
  Box domain_;
  std::vector<int> cells_;
  std::optional<int> time_axis_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
};

/// Convenience front end taking per-axis (lo, hi) bounds.
Mesh build_mesh(const std::vector<std::pair<double, double>>& bounds,
                const std::vector<int>& cells_per_axis,
                std::optional<int> time_axis = std::nullopt);

// Jumps across an interior face, following the outward-normal convention of
// each neighbor. `w1`/`w2` are the traces from neighbors[0]/neighbors[1].

/// [[w]]_N = w1 n_K1 + w2 n_K2 (vector; only the face axis is nonzero).
std::array<Complex, kMaxDim> normal_jump(const Face& face, Complex w1, Complex w2);
/// [[tau]]_N = tau1 . n_K1 + tau2 . n_K2
Complex normal_jump(const Face& face, const std::array<Complex, kMaxDim>& tau1,
                    const std::array<Complex, kMaxDim>& tau2);
/// [[w]]_t = (w^- - w^+) n^t_F on a space-like face.
Complex time_jump(const Face& face, Complex w_minus, Complex w_plus);

}  // namespace dgnn
