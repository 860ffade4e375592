#pragma once

#include "hjsg/mra/adaptive_space.hpp"

#include <span>
#include <vector>

namespace hjsg::mra
{
enum class BasisFamily
{
  alpert,
  interpolatory,
  point_values
};

// Shape of the per-element dense block: ncomp components, each a tensor with
// extents[m] entries along dimension m. Components are outermost and the last
// dimension runs fastest.
struct BlockShape
{
  int ncomp = 1;
  std::vector<int> extents;

  static BlockShape uniform(int dim, int extent, int ncomp = 1)
  {
    return BlockShape{ncomp, std::vector<int>(dim, extent)};
  }

  int dim() const { return static_cast<int>(extents.size()); }
  int component_size() const
  {
    int s = 1;
    for (int e : extents)
      s *= e;
    return s;
  }
  int size() const { return ncomp * component_size(); }
  // Product of extents before m (times ncomp) and after m.
  int outer(int m) const
  {
    int s = ncomp;
    for (int j = 0; j < m; ++j)
      s *= extents[j];
    return s;
  }
  int inner(int m) const
  {
    int s = 1;
    for (int j = m + 1; j < dim(); ++j)
      s *= extents[j];
    return s;
  }
  bool operator==(BlockShape const &) const = default;
};

// Per-element coefficient blocks over an AdaptiveSpace, stored contiguously
// in the space's element order.
class HierCoeffField
{
public:
  HierCoeffField() = default;
  HierCoeffField(SpacePtr space, BasisFamily family, BlockShape shape)
      : space_(std::move(space)), family_(family), shape_(std::move(shape)),
        data_(space_->size() * static_cast<std::size_t>(shape_.size()), 0.0)
  {
  }
  // Scalar field with a uniform degree per dimension.
  HierCoeffField(SpacePtr space, BasisFamily family, int degree)
      : HierCoeffField(space, family, BlockShape::uniform(space->dim(), degree + 1))
  {
  }

  SpacePtr const &space() const { return space_; }
  BasisFamily family() const { return family_; }
  BlockShape const &shape() const { return shape_; }
  int block_size() const { return shape_.size(); }
  std::size_t elements() const { return space_ ? space_->size() : 0; }

  std::span<double> block(std::size_t e)
  {
    return {data_.data() + e * block_size(), static_cast<std::size_t>(block_size())};
  }
  std::span<double const> block(std::size_t e) const
  {
    return {data_.data() + e * block_size(), static_cast<std::size_t>(block_size())};
  }

  std::vector<double> &data() { return data_; }
  std::vector<double> const &data() const { return data_; }

  // Component c as a scalar field with the same space and extents.
  HierCoeffField component(int c) const;
  // Stacks scalar fields with equal shapes into one multi-component field.
  static HierCoeffField stack(std::vector<HierCoeffField const *> const &parts);

  // Copies blocks onto another space; elements missing in the source get
  // zero blocks, elements missing in the target are dropped.
  HierCoeffField transferred_to(SpacePtr target) const;

  HierCoeffField &operator+=(HierCoeffField const &other);
  HierCoeffField &operator-=(HierCoeffField const &other);
  HierCoeffField &operator*=(double s);
  // this += s * other
  void axpy(double s, HierCoeffField const &other);
  // this = a * this + b * other
  void lincomb(double a, double b, HierCoeffField const &other);

  double max_abs() const;
  bool all_finite() const;

private:
  void check_compatible(HierCoeffField const &other) const;

  SpacePtr space_;
  BasisFamily family_ = BasisFamily::alpert;
  BlockShape shape_;
  std::vector<double> data_;
};

// Sum over keys present in both fields of blockwise dot products. For Alpert
// fields this is the L2 inner product of the reconstructions.
double inner_product(HierCoeffField const &u, HierCoeffField const &v);

} // namespace hjsg::mra
