#include "hjsg/mra/operator1d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hjsg::mra
{
namespace
{
constexpr std::uint32_t file_magic = 0x4f50314du; // "OP1M"
constexpr std::uint32_t file_version = 1;

template <typename T>
void write_pod(std::ostream &out, T const &v)
{
  out.write(reinterpret_cast<char const *>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream &in)
{
  T v{};
  in.read(reinterpret_cast<char *>(&v), sizeof(T));
  if (!in)
    throw std::runtime_error("Operator1D::load: truncated stream");
  return v;
}
} // namespace

Operator1D::Operator1D(int max_level, int rows, int cols)
    : max_level_(max_level), num_nodes_(node_count(max_level)), rows_(rows), cols_(cols),
      index_(static_cast<std::size_t>(num_nodes_) * num_nodes_, -1)
{
}

void Operator1D::set_block(Node r, Node c, std::span<double const> values)
{
  std::size_t const bs = static_cast<std::size_t>(rows_) * cols_;
  if (values.size() != bs)
    throw std::invalid_argument("Operator1D::set_block: wrong block size");
  std::int32_t &id = index_[r * num_nodes_ + c];
  if (id < 0)
  {
    id = static_cast<std::int32_t>(blocks_.size() / bs);
    blocks_.insert(blocks_.end(), values.begin(), values.end());
  }
  else
  {
    std::copy(values.begin(), values.end(), blocks_.begin() + static_cast<std::ptrdiff_t>(id * bs));
  }
}

void Operator1D::add_block(Node r, Node c, std::span<double const> values)
{
  std::size_t const bs = static_cast<std::size_t>(rows_) * cols_;
  if (values.size() != bs)
    throw std::invalid_argument("Operator1D::add_block: wrong block size");
  std::int32_t &id = index_[r * num_nodes_ + c];
  if (id < 0)
  {
    id = static_cast<std::int32_t>(blocks_.size() / bs);
    blocks_.insert(blocks_.end(), values.begin(), values.end());
    return;
  }
  for (std::size_t i = 0; i < bs; ++i)
    blocks_[id * bs + i] += values[i];
}

void Operator1D::prune(double tol)
{
  std::size_t const bs = static_cast<std::size_t>(rows_) * cols_;
  std::vector<double> kept;
  kept.reserve(blocks_.size());
  // Renumber in node order so the layout does not depend on insertion order.
  for (int r = 0; r < num_nodes_; ++r)
    for (int c = 0; c < num_nodes_; ++c)
    {
      std::int32_t &id = index_[r * num_nodes_ + c];
      if (id < 0)
        continue;
      auto first = blocks_.begin() + static_cast<std::ptrdiff_t>(id * bs);
      double m = 0.0;
      for (std::size_t i = 0; i < bs; ++i)
        m = std::max(m, std::abs(first[i]));
      if (m <= tol)
      {
        id = -1;
        continue;
      }
      id = static_cast<std::int32_t>(kept.size() / bs);
      kept.insert(kept.end(), first, first + static_cast<std::ptrdiff_t>(bs));
    }
  blocks_ = std::move(kept);
}

Operator1D Operator1D::transposed() const
{
  Operator1D t(max_level_, cols_, rows_);
  std::vector<double> buf(static_cast<std::size_t>(rows_) * cols_);
  for (int r = 0; r < num_nodes_; ++r)
    for (int c = 0; c < num_nodes_; ++c)
    {
      double const *blk = block(r, c);
      if (blk == nullptr)
        continue;
      for (int a = 0; a < rows_; ++a)
        for (int b = 0; b < cols_; ++b)
          buf[b * rows_ + a] = blk[a * cols_ + b];
      t.set_block(c, r, buf);
    }
  return t;
}

void Operator1D::save(std::ostream &out) const
{
  write_pod(out, file_magic);
  write_pod(out, file_version);
  write_pod(out, static_cast<std::int32_t>(max_level_));
  write_pod(out, static_cast<std::int32_t>(rows_));
  write_pod(out, static_cast<std::int32_t>(cols_));
  write_pod(out, static_cast<std::uint64_t>(blocks_.size()));
  out.write(reinterpret_cast<char const *>(index_.data()),
            static_cast<std::streamsize>(index_.size() * sizeof(std::int32_t)));
  out.write(reinterpret_cast<char const *>(blocks_.data()),
            static_cast<std::streamsize>(blocks_.size() * sizeof(double)));
}

Operator1D Operator1D::load(std::istream &in)
{
  if (read_pod<std::uint32_t>(in) != file_magic)
    throw std::runtime_error("Operator1D::load: bad magic");
  if (read_pod<std::uint32_t>(in) != file_version)
    throw std::runtime_error("Operator1D::load: unsupported version");
  int const max_level = read_pod<std::int32_t>(in);
  int const rows = read_pod<std::int32_t>(in);
  int const cols = read_pod<std::int32_t>(in);
  if (max_level < 0 || max_level > level_cap || rows < 1 || cols < 1)
    throw std::runtime_error("Operator1D::load: bad header");
  Operator1D op(max_level, rows, cols);
  auto const count = read_pod<std::uint64_t>(in);
  in.read(reinterpret_cast<char *>(op.index_.data()),
          static_cast<std::streamsize>(op.index_.size() * sizeof(std::int32_t)));
  op.blocks_.resize(count);
  in.read(reinterpret_cast<char *>(op.blocks_.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in)
    throw std::runtime_error("Operator1D::load: truncated stream");
  return op;
}

Operator1D identity_operator(int max_level, int n)
{
  Operator1D op(max_level, n, n);
  std::vector<double> eye(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    eye[i * n + i] = 1.0;
  for (int r = 0; r < op.num_nodes(); ++r)
    op.set_block(r, r, eye);
  return op;
}

} // namespace hjsg::mra
