#pragma once

#include "infogeo/core.hpp"

#include <array>
#include <initializer_list>
#include <memory>
#include <type_traits>
#include <vector>

namespace infogeo {

/// A d-tuple of non-negative derivative orders, d <= 2.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> orders);
  static MultiIndex zero(int d);

  int dim() const { return dim_; }
  int operator[](int axis) const { return s_[axis]; }
  int weight() const;

  bool operator==(const MultiIndex&) const = default;

 private:
  std::array<int, 2> s_{0, 0};
  int dim_ = 1;
};

/// Uniform derivative operator along one axis: 4th-order central stencils in
/// the interior, one-sided stencils of the same order near either end.
class FdOperator1d {
 public:
  FdOperator1d(Eigen::Index n, double h, int order);

  int order() const { return order_; }

  /// out[i*ostride] = (D u)[i] for a line of n samples u[i*stride].
  void apply(const double* in, Eigen::Index stride, double* out,
             Eigen::Index ostride) const;

 private:
  struct Stencil {
    Eigen::Index first = 0;  // relative to the node
    Vector weights;
  };
  Eigen::Index n_;
  int order_;
  Eigen::Index reach_;
  Stencil central_;
  std::vector<Stencil> left_, right_;
};

/// Truncated tensor-product grid over [-L, L]^d with n (odd) nodes per axis.
class TensorGrid {
 public:
  TensorGrid(int d, double half_width, int points_per_axis);

  int dim() const { return d_; }
  double half_width() const { return L_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return h_; }
  const Vector& nodes() const { return nodes_; }
  Eigen::Index size() const { return size_; }
  int center_index() const { return n_ / 2; }

  Point point(Eigen::Index flat) const;
  /// Trapezoid weights of the product rule (no measure attached).
  const Vector& trapezoid_weights() const { return trap_; }
  const FdOperator1d& derivative(int order) const;

  GridFunction coordinate(int axis) const;

  /// Sample f at every node. f takes a double (d == 1 only) or a Point.
  template <class F>
  GridFunction sample(F&& f) const {
    GridFunction out(size_);
    if constexpr (std::is_invocable_v<F, double>) {
      if (d_ != 1) throw DomainError("sample: scalar callable on a 2-D grid");
      for (Eigen::Index i = 0; i < size_; ++i) out[i] = f(nodes_[i]);
    } else {
      for (Eigen::Index i = 0; i < size_; ++i) out[i] = f(point(i));
    }
    return out;
  }

  void check(const Eigen::Ref<const Vector>& u, const char* what) const;

 private:
  int d_;
  double L_;
  int n_;
  double h_;
  Eigen::Index size_;
  Vector nodes_;
  Vector trap_;
  std::vector<FdOperator1d> ops_;
};

using GridPtr = std::shared_ptr<const TensorGrid>;

/// Validates d in {1,2}, odd n >= 9, L > 0.
GridPtr build_grid(int d, double half_width, int points_per_axis);

/// Weak-derivative approximation D^s u by the grid's finite-difference operators.
GridFunction diff(const TensorGrid& grid, const Eigen::Ref<const Vector>& u,
                  const MultiIndex& s);

/// Derivative of uniformly spaced 1-D samples with the same stencil family.
Vector diff_1d(const Eigen::Ref<const Vector>& u, double h, int order);

}  // namespace infogeo
