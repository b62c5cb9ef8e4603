#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace cubemix {

// Dense binary vector indexed by coordinate 1..N; used by the simulator
// where N routinely exceeds machine-word width.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::int64_t n) : n_(n), w_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

  std::int64_t size() const { return n_; }

  bool get(std::int64_t coord) const {  // 1-based
    const std::size_t i = static_cast<std::size_t>(coord - 1);
    return (w_[i >> 6] >> (i & 63)) & 1;
  }

  void set(std::int64_t coord, bool v) {
    const std::size_t i = static_cast<std::size_t>(coord - 1);
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) w_[i >> 6] |= m;
    else w_[i >> 6] &= ~m;
  }

  void fill(bool v) {
    for (auto& w : w_) w = v ? ~std::uint64_t{0} : 0;
    trim();
  }

  std::int64_t weight() const {
    std::int64_t c = 0;
    for (std::uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  void trim() {
    if (n_ % 64 != 0 && !w_.empty())
      w_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::int64_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace cubemix
