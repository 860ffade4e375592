#include "hjsg/mra/coeff_field.hpp"

#include "hjsg/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjsg::mra
{
HierCoeffField HierCoeffField::component(int c) const
{
  BlockShape shape = shape_;
  shape.ncomp = 1;
  HierCoeffField out(space_, family_, shape);
  int const cs = shape.size();
  for (std::size_t e = 0; e < elements(); ++e)
  {
    auto src = block(e).subspan(static_cast<std::size_t>(c) * cs, cs);
    std::copy(src.begin(), src.end(), out.block(e).begin());
  }
  return out;
}

HierCoeffField HierCoeffField::stack(std::vector<HierCoeffField const *> const &parts)
{
  if (parts.empty())
    throw std::invalid_argument("HierCoeffField::stack: no parts");
  BlockShape shape = parts.front()->shape();
  int const cs = shape.component_size() * shape.ncomp;
  shape.ncomp *= static_cast<int>(parts.size());
  HierCoeffField out(parts.front()->space(), parts.front()->family(), shape);
  for (std::size_t p = 0; p < parts.size(); ++p)
  {
    if (parts[p]->space() != out.space() || parts[p]->shape() != parts.front()->shape())
      throw std::invalid_argument("HierCoeffField::stack: incompatible parts");
    for (std::size_t e = 0; e < out.elements(); ++e)
    {
      auto src = parts[p]->block(e);
      std::copy(src.begin(), src.end(), out.block(e).begin() + p * cs);
    }
  }
  return out;
}

HierCoeffField HierCoeffField::transferred_to(SpacePtr target) const
{
  HierCoeffField out(target, family_, shape_);
  for (std::size_t e = 0; e < out.elements(); ++e)
  {
    std::ptrdiff_t const src = space_->find(target->key(e));
    if (src < 0)
      continue;
    auto from = block(static_cast<std::size_t>(src));
    std::copy(from.begin(), from.end(), out.block(e).begin());
  }
  return out;
}

void HierCoeffField::check_compatible(HierCoeffField const &other) const
{
  if (space_ != other.space_ || shape_ != other.shape_ || family_ != other.family_)
    throw std::invalid_argument("HierCoeffField: incompatible operands");
}

HierCoeffField &HierCoeffField::operator+=(HierCoeffField const &other)
{
  axpy(1.0, other);
  return *this;
}

HierCoeffField &HierCoeffField::operator-=(HierCoeffField const &other)
{
  axpy(-1.0, other);
  return *this;
}

HierCoeffField &HierCoeffField::operator*=(double s)
{
  for (double &v : data_)
    v *= s;
  return *this;
}

void HierCoeffField::axpy(double s, HierCoeffField const &other)
{
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += s * other.data_[i];
}

void HierCoeffField::lincomb(double a, double b, HierCoeffField const &other)
{
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] = a * data_[i] + b * other.data_[i];
}

double HierCoeffField::max_abs() const
{
  double m = 0.0;
  for (double v : data_)
    m = std::max(m, std::abs(v));
  return m;
}

bool HierCoeffField::all_finite() const
{
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double inner_product(HierCoeffField const &u, HierCoeffField const &v)
{
  if (u.family() != v.family())
    throw ConfigError("inner_product: mismatched basis family");
  if (u.shape() != v.shape())
    throw ConfigError("inner_product: mismatched block shapes");
  double sum = 0.0;
  for (std::size_t e = 0; e < u.elements(); ++e)
  {
    std::ptrdiff_t const f = v.space()->find(u.space()->key(e));
    if (f < 0)
      continue;
    auto a = u.block(e);
    auto b = v.block(static_cast<std::size_t>(f));
    for (std::size_t i = 0; i < a.size(); ++i)
      sum += a[i] * b[i];
  }
  return sum;
}

} // namespace hjsg::mra
