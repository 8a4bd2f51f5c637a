#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "shaprob/error.hpp"

namespace shaprob {

inline constexpr std::size_t kMaxPlayers = 63;

/// Subset of feature indices stored as a bitmask. Bit i set means feature i
/// takes part in the coalition.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t mask) : mask_(mask) {}

  Coalition(std::initializer_list<std::size_t> members) {
    for (auto i : members) *this = with(i);
  }

  static constexpr Coalition empty() { return Coalition{}; }

  static Coalition grand(std::size_t n) {
    if (n > kMaxPlayers)
      throw Error(ErrorKind::IndexOutOfRange, "coalition supports at most 63 players");
    return Coalition(n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n)));
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool is_empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool contains(std::size_t i) const { return i < 64 && ((mask_ >> i) & 1U); }

  Coalition with(std::size_t i) const {
    if (i >= kMaxPlayers) throw Error(ErrorKind::IndexOutOfRange, "player index beyond 62");
    return Coalition(mask_ | (std::uint64_t{1} << i));
  }
  constexpr Coalition without(std::size_t i) const {
    return i < 64 ? Coalition(mask_ & ~(std::uint64_t{1} << i)) : *this;
  }

  /// True when no bit at or above `n` is set.
  constexpr bool fits(std::size_t n) const {
    return n >= 64 || (mask_ >> n) == 0;
  }

  /// Member indices in ascending order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::uint64_t m = mask_; m != 0; m &= m - 1)
      out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  friend constexpr bool operator==(Coalition, Coalition) = default;

 private:
  std::uint64_t mask_ = 0;
};

}  // namespace shaprob
