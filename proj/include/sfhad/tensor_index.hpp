#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfhad {

/// Extents of a d-dimensional tensor-product index set. Direction 0 (x) varies
/// fastest: flat = i_0 + n_0 * (i_1 + n_1 * (i_2 + ...)).
class TensorLayout {
public:
  /// Throws InvalidInputError for d == 0 or a zero extent, CapacityError if
  /// the total size overflows std::size_t.
  explicit TensorLayout(std::vector<std::size_t> extents);

  /// All d extents equal to n.
  static TensorLayout uniform(std::size_t d, std::size_t n);

  /// All extents n except direction `direction`, which has extent m.
  static TensorLayout with_direction(std::size_t d, std::size_t n, std::size_t direction,
                                     std::size_t m);

  std::size_t dim() const noexcept { return extents_.size(); }
  std::size_t extent(std::size_t direction) const noexcept { return extents_[direction]; }
  std::size_t stride(std::size_t direction) const noexcept { return strides_[direction]; }
  std::span<const std::size_t> extents() const noexcept { return extents_; }
  std::size_t size() const noexcept { return size_; }

  /// Throws IndexBoundsError if multi has the wrong length or a component is
  /// out of range.
  std::size_t flatten(std::span<const std::size_t> multi) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  /// Allocation-free variant; `multi` must have dim() entries.
  void unflatten_into(std::size_t flat, std::span<std::size_t> multi) const;

  /// 1D index of `flat` along one direction.
  std::size_t component(std::size_t flat, std::size_t direction) const noexcept {
    return (flat / strides_[direction]) % extents_[direction];
  }

private:
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Overflow-checked product; throws CapacityError naming `what`.
std::size_t checked_mul(std::size_t a, std::size_t b, const char* what);

/// Overflow-checked base^exp.
std::size_t checked_pow(std::size_t base, std::size_t exp, const char* what);

} // namespace sfhad
