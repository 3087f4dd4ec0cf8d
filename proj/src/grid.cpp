#include "infogeo/grid.hpp"

#include "infogeo/numerics.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace infogeo {

MultiIndex::MultiIndex(std::initializer_list<int> orders) {
  if (orders.size() < 1 || orders.size() > 2) {
    throw DomainError("MultiIndex: dimension must be 1 or 2");
  }
  dim_ = static_cast<int>(orders.size());
  int i = 0;
  for (int s : orders) {
    if (s < 0) throw DomainError("MultiIndex: negative order");
    s_[i++] = s;
  }
}

MultiIndex MultiIndex::zero(int d) {
  return d == 1 ? MultiIndex{0} : MultiIndex{0, 0};
}

int MultiIndex::weight() const { return s_[0] + (dim_ == 2 ? s_[1] : 0); }

namespace {

Vector weights_for(int order, Eigen::Index first, Eigen::Index count) {
  std::vector<double> offsets(static_cast<std::size_t>(count));
  std::iota(offsets.begin(), offsets.end(), static_cast<double>(first));
  return numerics::fd_weights(order, offsets);
}

}  // namespace

FdOperator1d::FdOperator1d(Eigen::Index n, double h, int order)
    : n_(n), order_(order), reach_(order <= 2 ? 2 : 3) {
  if (order < 1 || order > 4) {
    throw DomainError("derivative order must be in 1..4, got " +
                      std::to_string(order));
  }
  const Eigen::Index one_sided = order + 4;
  if (n < one_sided + 1) throw DomainError("grid too small for stencil");
  const double scale = std::pow(h, -order);
  central_ = {-reach_, weights_for(order, -reach_, 2 * reach_ + 1) * scale};
  for (Eigen::Index i = 0; i < reach_; ++i) {
    left_.push_back({-i, weights_for(order, -i, one_sided) * scale});
    const Eigen::Index node = n - 1 - i;
    const Eigen::Index first = (n - one_sided) - node;
    right_.push_back({first, weights_for(order, first, one_sided) * scale});
  }
}

void FdOperator1d::apply(const double* in, Eigen::Index stride, double* out,
                         Eigen::Index ostride) const {
  auto run = [&](Eigen::Index i, const Stencil& st) {
    double acc = 0.0;
    const double* base = in + (i + st.first) * stride;
    for (Eigen::Index j = 0; j < st.weights.size(); ++j) {
      acc += st.weights[j] * base[j * stride];
    }
    out[i * ostride] = acc;
  };
  for (Eigen::Index i = 0; i < reach_; ++i) run(i, left_[i]);
  for (Eigen::Index i = reach_; i < n_ - reach_; ++i) run(i, central_);
  for (Eigen::Index i = 0; i < reach_; ++i) run(n_ - 1 - i, right_[i]);
}

TensorGrid::TensorGrid(int d, double half_width, int points_per_axis)
    : d_(d), L_(half_width), n_(points_per_axis) {
  if (d != 1 && d != 2) throw DomainError("grid dimension must be 1 or 2");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw DomainError("grid half-width must be positive");
  }
  if (points_per_axis < 9 || points_per_axis % 2 == 0) {
    throw DomainError("points per axis must be odd and >= 9, got " +
                      std::to_string(points_per_axis));
  }
  h_ = 2.0 * L_ / (n_ - 1);
  size_ = d_ == 1 ? n_ : static_cast<Eigen::Index>(n_) * n_;
  nodes_.resize(n_);
  const int c = n_ / 2;
  for (int i = 0; i < n_; ++i) nodes_[i] = (i - c) * h_;  // exact 0, symmetric

  Vector axis = Vector::Constant(n_, h_);
  axis[0] = axis[n_ - 1] = 0.5 * h_;
  if (d_ == 1) {
    trap_ = axis;
  } else {
    trap_.resize(size_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) trap_[i * n_ + j] = axis[i] * axis[j];
  }
  for (int order = 1; order <= 4; ++order) ops_.emplace_back(n_, h_, order);
}

Point TensorGrid::point(Eigen::Index flat) const {
  Point x(d_);
  if (d_ == 1) {
    x[0] = nodes_[flat];
  } else {
    x[0] = nodes_[flat / n_];
    x[1] = nodes_[flat % n_];
  }
  return x;
}

const FdOperator1d& TensorGrid::derivative(int order) const {
  if (order < 1 || order > 4) {
    throw DomainError("derivative order must be in 1..4");
  }
  return ops_[order - 1];
}

GridFunction TensorGrid::coordinate(int axis) const {
  if (axis < 0 || axis >= d_) throw DomainError("coordinate: bad axis");
  return sample([axis](const Point& x) { return x[axis]; });
}

void TensorGrid::check(const Eigen::Ref<const Vector>& u, const char* what) const {
  if (u.size() != size_) {
    throw DomainError(std::string(what) + ": grid function has " +
                      std::to_string(u.size()) + " values, grid has " +
                      std::to_string(size_));
  }
}

GridPtr build_grid(int d, double half_width, int points_per_axis) {
  return std::make_shared<const TensorGrid>(d, half_width, points_per_axis);
}

GridFunction diff(const TensorGrid& grid, const Eigen::Ref<const Vector>& u,
                  const MultiIndex& s) {
  grid.check(u, "diff");
  if (s.dim() != grid.dim()) throw DomainError("diff: multi-index dimension");
  if (s.weight() > 4) throw DomainError("diff: |s| > 4 not supported");
  GridFunction cur = u;
  GridFunction next(cur.size());
  const Eigen::Index n = grid.points_per_axis();
  for (int axis = 0; axis < grid.dim(); ++axis) {
    if (s[axis] == 0) continue;
    const auto& op = grid.derivative(s[axis]);
    if (grid.dim() == 1) {
      op.apply(cur.data(), 1, next.data(), 1);
    } else if (axis == 0) {
      for (Eigen::Index j = 0; j < n; ++j) {
        op.apply(cur.data() + j, n, next.data() + j, n);
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        op.apply(cur.data() + i * n, 1, next.data() + i * n, 1);
      }
    }
    cur.swap(next);
  }
  return cur;
}

Vector diff_1d(const Eigen::Ref<const Vector>& u, double h, int order) {
  if (order == 0) return u;
  FdOperator1d op(u.size(), h, order);
  Vector out(u.size());
  op.apply(u.data(), 1, out.data(), 1);
  return out;
}

}  // namespace infogeo
