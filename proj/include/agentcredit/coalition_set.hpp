#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace agentcredit {

using AgentId = std::uint32_t;

inline constexpr std::size_t kMaxAgents = 64;

// A subset of agents stored as one bit per agent index. Equality, ordering
// and hashing all go through the raw bit pattern.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static constexpr Coalition single(AgentId a) { return Coalition(std::uint64_t{1} << a); }
  // The first n agents.
  static constexpr Coalition all(std::size_t n) {
    return Coalition(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static Coalition of(std::initializer_list<AgentId> agents) {
    Coalition c;
    for (AgentId a : agents) c = c.with(a);
    return c;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(AgentId a) const { return (bits_ >> a) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  constexpr Coalition with(AgentId a) const { return Coalition(bits_ | (std::uint64_t{1} << a)); }
  constexpr Coalition without(AgentId a) const { return Coalition(bits_ & ~(std::uint64_t{1} << a)); }

  constexpr bool is_subset_of(Coalition other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(Coalition other) const { return (bits_ & other.bits_) != 0; }

  constexpr Coalition operator&(Coalition o) const { return Coalition(bits_ & o.bits_); }
  constexpr Coalition operator|(Coalition o) const { return Coalition(bits_ | o.bits_); }
  constexpr Coalition minus(Coalition o) const { return Coalition(bits_ & ~o.bits_); }

  // Members in ascending index order.
  std::vector<AgentId> members() const {
    std::vector<AgentId> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<AgentId>(std::countr_zero(b)));
    }
    return out;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      fn(static_cast<AgentId>(std::countr_zero(b)));
    }
  }

  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace agentcredit

template <>
struct std::hash<agentcredit::Coalition> {
  std::size_t operator()(agentcredit::Coalition c) const noexcept {
    return std::hash<std::uint64_t>{}(c.bits());
  }
};
