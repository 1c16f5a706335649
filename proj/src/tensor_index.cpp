#include "sfhad/tensor_index.hpp"

#include <limits>
#include <string>
#include <utility>

#include "sfhad/errors.hpp"

namespace sfhad {

std::size_t checked_mul(std::size_t a, std::size_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    throw CapacityError(std::string(what) + ": size overflows the index type");
  return a * b;
}

std::size_t checked_pow(std::size_t base, std::size_t exp, const char* what) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base, what);
  return r;
}

TensorLayout::TensorLayout(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) throw InvalidInputError("TensorLayout: dimension count must be >= 1");
  strides_.resize(extents_.size());
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    if (extents_[k] == 0)
      throw InvalidInputError("TensorLayout: extent of direction " + std::to_string(k) + " is 0");
    strides_[k] = size_;
    size_ = checked_mul(size_, extents_[k], "TensorLayout");
  }
}

TensorLayout TensorLayout::uniform(std::size_t d, std::size_t n) {
  return TensorLayout(std::vector<std::size_t>(d, n));
}

TensorLayout TensorLayout::with_direction(std::size_t d, std::size_t n, std::size_t direction,
                                          std::size_t m) {
  if (direction >= d) throw IndexBoundsError("TensorLayout: direction out of range");
  std::vector<std::size_t> e(d, n);
  e[direction] = m;
  return TensorLayout(std::move(e));
}

std::size_t TensorLayout::flatten(std::span<const std::size_t> multi) const {
  if (multi.size() != extents_.size())
    throw IndexBoundsError("flatten: expected " + std::to_string(extents_.size()) +
                           " components, got " + std::to_string(multi.size()));
  std::size_t flat = 0;
  for (std::size_t k = 0; k < multi.size(); ++k) {
    if (multi[k] >= extents_[k])
      throw IndexBoundsError("flatten: component " + std::to_string(k) + " = " +
                             std::to_string(multi[k]) + " not below extent " +
                             std::to_string(extents_[k]));
    flat += multi[k] * strides_[k];
  }
  return flat;
}

std::vector<std::size_t> TensorLayout::unflatten(std::size_t flat) const {
  std::vector<std::size_t> multi(extents_.size());
  unflatten_into(flat, multi);
  return multi;
}

void TensorLayout::unflatten_into(std::size_t flat, std::span<std::size_t> multi) const {
  if (flat >= size_)
    throw IndexBoundsError("unflatten: flat index " + std::to_string(flat) + " not below " +
                           std::to_string(size_));
  if (multi.size() != extents_.size())
    throw IndexBoundsError("unflatten: output has wrong length");
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    multi[k] = flat % extents_[k];
    flat /= extents_[k];
  }
}

} // namespace sfhad
