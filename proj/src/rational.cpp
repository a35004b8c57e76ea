#include "qbc/rational.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>
#include <system_error>

#include "qbc/error.hpp"

namespace qbc {
namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw ArgumentError("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&] { return ArgumentError("not a number: '" + std::string(text) + "'"); };
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = 0, d = 0;
    auto lhs = text.substr(0, slash), rhs = text.substr(slash + 1);
    auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), n);
    auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), d);
    if (r1.ec != std::errc() || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc() ||
        r2.ptr != rhs.data() + rhs.size() || d == 0) {
      throw fail();
    }
    return Rational(n, d);
  }

  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  i128 num = 0, den = 1;
  bool digits = false, point = false;
  int exponent = 0;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = true;
      num = num * 10 + (c - '0');
      if (point) den *= 10;
      if (num > (i128(1) << 100) || den > (i128(1) << 100)) throw fail();
    } else if (c == '.' && !point) {
      point = true;
    } else if ((c == 'e' || c == 'E') && digits) {
      auto rest = text.substr(pos + 1);
      if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
      auto r = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
      if (r.ec != std::errc() || r.ptr != rest.data() + rest.size() || exponent > 18 || exponent < -18) {
        throw fail();
      }
      pos = text.size();
      break;
    } else {
      throw fail();
    }
  }
  if (!digits) throw fail();
  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  return make(negative ? -num : num, den);
}

Rational Rational::from_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  if (r.ec != std::errc()) throw ArgumentError("cannot convert double to rational");
  return parse(std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)));
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal_string() const {
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  if (d != 1) return to_string();
  int places = std::max(twos, fives);
  i128 scaled = i128(num_);
  for (int i = 0; i < places; ++i) scaled *= 10;
  scaled /= den_;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  } while (scaled > 0);
  if (places > 0) {
    while (static_cast<int>(digits.size()) <= places) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - places, '.');
  }
  return neg ? "-" + digits : digits;
}

std::int64_t Rational::floor() const { return narrow(floor_div(num_, den_)); }
std::int64_t Rational::ceil() const { return narrow(-floor_div(-i128(num_), den_)); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw ArgumentError("rational division by zero");
  return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 lhs = i128(a.num_) * b.den_;
  i128 rhs = i128(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

bool at_least(std::int64_t count, const Rational& ratio, std::int64_t a, std::int64_t b) {
  return i128(count) * ratio.den() >= i128(ratio.num()) * a * b;
}

std::int64_t ceil_product(const Rational& ratio, std::int64_t a, std::int64_t b) {
  i128 n = i128(ratio.num()) * a * b;
  return narrow(-floor_div(-n, ratio.den()));
}

}  // namespace qbc
