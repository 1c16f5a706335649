#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <new>
#include <span>
#include <utility>
#include <vector>

#include "sfhad/allocation_ledger.hpp"

namespace sfhad {

namespace detail {

// Value-initialization becomes default-initialization, so resizing a vector of
// doubles leaves the entries unwritten. Used when every entry is overwritten.
template <class T>
struct DefaultInitAllocator : std::allocator<T> {
  template <class U>
  struct rebind {
    using other = DefaultInitAllocator<U>;
  };
  using std::allocator<T>::allocator;
  template <class U>
  void construct(U* p) noexcept {
    ::new (static_cast<void*>(p)) U;
  }
  template <class U, class... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }
};

} // namespace detail

/// Row-major rectangular real matrix. Storage is charged to the active
/// AllocationLedger.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  /// Entries are left unspecified; the caller must write every one.
  static DenseMatrix uninitialized(std::size_t rows, std::size_t cols);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  /// Bounds-checked access; throws IndexBoundsError.
  double at(std::size_t r, std::size_t c) const;

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix transpose() const;

  /// Largest absolute entry; zero for an empty matrix.
  double max_abs() const noexcept;

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double, detail::DefaultInitAllocator<double>> data_;
  LedgerCharge charge_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws NumericalFailure when a pivot vanishes relative to the matrix scale.
DenseMatrix inverse(const DenseMatrix& a);

/// max |a - b| / max(max|b|, tiny); shapes must agree.
double max_relative_difference(const DenseMatrix& a, const DenseMatrix& b);

} // namespace sfhad
