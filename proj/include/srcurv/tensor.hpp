#pragma once

#include <array>
#include <cassert>
#include <numeric>
#include <vector>

namespace srcurv {

/// Dense row-major tensor of fixed rank. Dimensions stay small (n <= 16), so
/// everything is stored densely.
template <class T, std::size_t Rank>
class DenseTensor {
 public:
  DenseTensor() { dims_.fill(0); }

  explicit DenseTensor(std::array<int, Rank> dims) : dims_(dims) {
    std::size_t total = 1;
    for (int d : dims_) total *= static_cast<std::size_t>(d);
    data_.assign(total, T(0));
  }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  int dim(std::size_t axis) const { return dims_[axis]; }
  const std::array<int, Rank>& dims() const { return dims_; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool operator==(const DenseTensor& other) const {
    return dims_ == other.dims_ && data_ == other.data_;
  }

 private:
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t off = 0;
    for (std::size_t a = 0; a < Rank; ++a) {
      assert(idx[a] >= 0 && idx[a] < dims_[a]);
      off = off * static_cast<std::size_t>(dims_[a]) + static_cast<std::size_t>(idx[a]);
    }
    return off;
  }

  std::array<int, Rank> dims_;
  std::vector<T> data_;
};

template <class T>
using Tensor3 = DenseTensor<T, 3>;
template <class T>
using Tensor4 = DenseTensor<T, 4>;

}  // namespace srcurv
