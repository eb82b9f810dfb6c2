#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace mha {

// Exact scalar a + b*i with a, b arbitrary-precision rationals. Plain
// rationals are the b == 0 case; conjugation is then the identity, so the
// same type serves both scalar modes.
class Scalar {
public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long n) : re_(n), im_(0) {}
    Scalar(long num, long den) : re_(num, den), im_(0) { re_.canonicalize(); }
    explicit Scalar(mpq_class re) : re_(std::move(re)), im_(0) {}
    Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }

    const mpq_class& real() const { return re_; }
    const mpq_class& imag() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    // Sign of the real part; only meaningful for real scalars.
    int sign() const { return sgn(re_); }

    Scalar conj() const { return Scalar(re_, mpq_class(-im_)); }

    Scalar operator-() const { return Scalar(mpq_class(-re_), mpq_class(-im_)); }

    Scalar& operator+=(const Scalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        if (sgn(im_) == 0 && sgn(o.im_) == 0) {
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    Scalar inverse() const;

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // "p/q" for rationals ("p" when q = 1), "p/q+r/s*i" with nonzero
    // imaginary part. This is the wire format used in all JSON files.
    std::string str() const;
    static Scalar parse(const std::string& text);

private:
    mpq_class re_, im_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

} // namespace mha
