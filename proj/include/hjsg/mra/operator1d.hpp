#pragma once

#include "hjsg/mra/node.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hjsg::mra
{
// A 1D operator between hierarchical bases, stored as a dense node-by-node
// table of dense blocks. Block (r, c) maps the cols coefficients of input
// node c to the rows coefficients of output node r; missing blocks are zero.
class Operator1D
{
public:
  Operator1D() = default;
  Operator1D(int max_level, int rows, int cols);

  int max_level() const { return max_level_; }
  int num_nodes() const { return num_nodes_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool has_block(Node r, Node c) const { return index_[r * num_nodes_ + c] >= 0; }
  // Row-major rows x cols block, or nullptr if the block is zero.
  double const *block(Node r, Node c) const
  {
    std::int32_t const id = index_[r * num_nodes_ + c];
    return id < 0 ? nullptr : blocks_.data() + static_cast<std::size_t>(id) * rows_ * cols_;
  }
  // Stores a block, replacing any previous one.
  void set_block(Node r, Node c, std::span<double const> values);
  // Adds to a block, allocating it if needed.
  void add_block(Node r, Node c, std::span<double const> values);

  std::size_t stored_blocks() const { return blocks_.size() / (static_cast<std::size_t>(rows_) * cols_); }

  // Entry (node r, degree a) x (node c, degree b).
  double entry(Node r, int a, Node c, int b) const
  {
    double const *blk = block(r, c);
    return blk == nullptr ? 0.0 : blk[a * cols_ + b];
  }

  // Drops blocks whose largest entry is at most tol in magnitude.
  void prune(double tol);

  Operator1D transposed() const;

  void save(std::ostream &out) const;
  static Operator1D load(std::istream &in);

private:
  int max_level_ = 0;
  int num_nodes_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int32_t> index_;
  std::vector<double> blocks_;
};

// Identity with blocks of size n x n on every node up to max_level.
Operator1D identity_operator(int max_level, int n);

} // namespace hjsg::mra
