#ifndef METASTAB_GRID_HPP
#define METASTAB_GRID_HPP

#include <cstddef>
#include <vector>

namespace metastab {

// Dense row-major matrix of arbitrary cell type.
template <class T>
class Grid {
 public:
  Grid() : rows_(0), cols_(0) {}
  Grid(int rows, int cols, T fill = T())
      : rows_(rows), cols_(cols), cells_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return cells_.empty(); }

  T& operator()(int r, int c) { return cells_[static_cast<size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return cells_[static_cast<size_t>(r) * cols_ + c]; }

  bool operator==(const Grid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && cells_ == other.cells_;
  }

 private:
  int rows_, cols_;
  std::vector<T> cells_;
};

}  // namespace metastab

#endif
