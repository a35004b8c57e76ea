#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qbc {

// Exact fraction num/den with den > 0, always stored in lowest terms.
//
// Thresholds such as gamma, delta and theta are kept exact so that
// feasibility tests like `edges >= gamma * nu * nv` never flip at boundary
// densities (0.8 against 4/5). Comparisons widen to 128 bits.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "3", "-0.25", "0.6", "3/5" and ".5". Throws ArgumentError.
  static Rational parse(std::string_view text);
  // Shortest decimal that round-trips the double, then parse().
  static Rational from_double(double x);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  // "3/5" form, or "3" when integral.
  std::string to_string() const;
  // Finite decimal when den is of the form 2^a 5^b, otherwise fraction form.
  std::string to_decimal_string() const;

  std::int64_t floor() const;
  std::int64_t ceil() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Exact test `count >= ratio * a * b` with 128-bit intermediates.
bool at_least(std::int64_t count, const Rational& ratio, std::int64_t a, std::int64_t b = 1);

// Smallest integer k with k >= ratio * a * b.
std::int64_t ceil_product(const Rational& ratio, std::int64_t a, std::int64_t b = 1);

}  // namespace qbc
