#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace starext {

/// Element of Q(i): re + im*i with exact rational parts.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }
  static GaussianRational rational(long num, long den) { return {mpq_class(num, den)}; }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// re^2 + im^2.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  /// Total order (re first, then im); only used for canonical sorting.
  friend std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b) {
    int c = cmp(a.re_, b.re_);
    if (c == 0) c = cmp(a.im_, b.im_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  GaussianRational pow(long e) const;

  /// Parseable text: "3/4", "-i", "1/2*i", "(1 + 2*i)".
  std::string to_string() const;
  /// True when to_string() is a single signed factor needing no parentheses in a product.
  bool prints_atomic() const { return is_real() || sgn(re_) == 0; }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace starext
