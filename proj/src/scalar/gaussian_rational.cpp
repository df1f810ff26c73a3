#include "starext/scalar/gaussian_rational.hpp"

#include "starext/errors.hpp"

namespace starext {

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero Gaussian rational");
  mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class m = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw DivisionByZero("division by zero Gaussian rational");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

GaussianRational GaussianRational::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  GaussianRational result(1);
  GaussianRational base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = im_.get_str() + "*i";
  }
  if (sgn(re_) == 0) return imag;
  std::string out = "(" + re_.get_str();
  if (sgn(im_) < 0) {
    out += " - " + (im_ == -1 ? std::string("i") : mpq_class(-im_).get_str() + "*i");
  } else {
    out += " + " + imag;
  }
  return out + ")";
}

}  // namespace starext
