#ifndef RWTA_WEIGHT_HPP
#define RWTA_WEIGHT_HPP

#include <charconv>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "rwta/error.hpp"

namespace rwta {

// A weight domain is a stateless tag type exposing its carrier and
// operations as static members. Root weights only need the additive
// commutative monoid; products and Hadamard products need a semiring.

template <class D>
concept WeightDomain = requires(const typename D::value_type& a, const typename D::value_type& b) {
  typename D::value_type;
  { D::zero() } -> std::convertible_to<typename D::value_type>;
  { D::add(a, b) } -> std::convertible_to<typename D::value_type>;
  { a == b } -> std::convertible_to<bool>;
  { D::format(a) } -> std::convertible_to<std::string>;
  { D::parse(std::string_view{}) } -> std::convertible_to<typename D::value_type>;
};

template <class D>
concept SemiringDomain = WeightDomain<D> && requires(const typename D::value_type& a,
                                                     const typename D::value_type& b) {
  { D::one() } -> std::convertible_to<typename D::value_type>;
  { D::mul(a, b) } -> std::convertible_to<typename D::value_type>;
};

template <WeightDomain D>
constexpr bool is_zero(const typename D::value_type& v) {
  return v == D::zero();
}

namespace detail {

inline std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc::result_out_of_range) {
    throw OverflowError("weight out of range: " + std::string(text));
  }
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("not a natural number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace detail

/// (N, +, x, 0, 1) on 64-bit unsigned integers. Overflow throws.
struct Natural {
  using value_type = std::uint64_t;

  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }

  static value_type add(value_type a, value_type b) {
    value_type r;
    if (__builtin_add_overflow(a, b, &r)) {
      throw OverflowError("natural addition overflow: " + std::to_string(a) + " + " + std::to_string(b));
    }
    return r;
  }

  static value_type mul(value_type a, value_type b) {
    value_type r;
    if (__builtin_mul_overflow(a, b, &r)) {
      throw OverflowError("natural multiplication overflow: " + std::to_string(a) + " * " + std::to_string(b));
    }
    return r;
  }

  static std::string format(value_type v) { return std::to_string(v); }
  static value_type parse(std::string_view text) { return detail::parse_u64(text); }
};

/// ({0,1}, or, and, 0, 1).
struct Boolean {
  using value_type = bool;

  static constexpr value_type zero() noexcept { return false; }
  static constexpr value_type one() noexcept { return true; }
  static constexpr value_type add(value_type a, value_type b) noexcept { return a || b; }
  static constexpr value_type mul(value_type a, value_type b) noexcept { return a && b; }

  static std::string format(value_type v) { return v ? "1" : "0"; }
  static value_type parse(std::string_view text) {
    if (text == "1" || text == "true") return true;
    if (text == "0" || text == "false") return false;
    throw InvalidArgument("not a boolean: '" + std::string(text) + "'");
  }
};

/// (N u {inf}, min, +, inf, 0). Infinity is the largest uint64.
struct Tropical {
  using value_type = std::uint64_t;
  static constexpr value_type infinity = std::numeric_limits<value_type>::max();

  static constexpr value_type zero() noexcept { return infinity; }
  static constexpr value_type one() noexcept { return 0; }
  static constexpr value_type add(value_type a, value_type b) noexcept { return a < b ? a : b; }

  static value_type mul(value_type a, value_type b) {
    if (a == infinity || b == infinity) return infinity;
    value_type r;
    if (__builtin_add_overflow(a, b, &r) || r == infinity) {
      throw OverflowError("tropical product overflow");
    }
    return r;
  }

  static std::string format(value_type v) { return v == infinity ? "inf" : std::to_string(v); }
  static value_type parse(std::string_view text) {
    if (text == "inf") return infinity;
    return detail::parse_u64(text);
  }
};

}  // namespace rwta

#endif  // RWTA_WEIGHT_HPP
