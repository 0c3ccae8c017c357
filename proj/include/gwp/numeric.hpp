#pragma once

/**
 * Exact arithmetic over the Gaussian rationals Q[i].
 *
 * Both components are GMP rationals kept in lowest terms with a positive
 * denominator, so two values compare equal exactly when their components
 * do. No floating point is used anywhere in the kernel.
 */

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace gwp {

using Integer = mpz_class;
using Rational = mpq_class;

class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}  // NOLINT: implicit from integers is intended
    GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    /// Parses "a/b+c/d*i" with either term optional ("3", "-i", "1/2*i", "1-2/3*i").
    static GaussianRational parse(std::string_view text);

    const Rational& re() const noexcept { return re_; }
    const Rational& im() const noexcept { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    /// True for elements of Z (imaginary part zero, integral real part).
    bool is_integer() const { return is_real() && re_.get_den() == 1; }

    GaussianRational conj() const { return {re_, -im_}; }
    /// |z|^2 = re^2 + im^2.
    Rational norm() const { return re_ * re_ + im_ * im_; }
    /// Multiplicative inverse; throws PreconditionError("division-by-zero") on 0.
    GaussianRational inv() const;

    std::string to_string() const;

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o) { return *this *= o.inv(); }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

private:
    Rational re_{0};
    Rational im_{0};
};

using GR = GaussianRational;

GaussianRational add(const GaussianRational& a, const GaussianRational& b);
GaussianRational mul(const GaussianRational& a, const GaussianRational& b);
GaussianRational inv(const GaussianRational& a);

/// i^n for any integer n.
GaussianRational i_power(long n);
/// z^n for n >= 0.
GaussianRational pow(const GaussianRational& z, unsigned long n);
Rational factorial(unsigned long n);

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

}  // namespace gwp
