#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sympquot {

/// Exact rational number. Always held in lowest terms with positive
/// denominator (the GMP canonical form); all arithmetic is exact.
class Scalar {
public:
    Scalar() : v_(0) {}
    Scalar(long n) : v_(n) {}  // NOLINT: implicit by design, literals read naturally
    Scalar(long num, long den) {
        if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Scalar(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Parses "p" or "p/q" in base 10. No decimals, no whitespace.
    static Scalar from_string(std::string_view s) {
        if (!looks_like_rational(s))
            throw std::invalid_argument("Scalar: malformed rational '" + std::string(s) + "'");
        mpq_class v;
        if (mpq_set_str(v.get_mpq_t(), std::string(s).c_str(), 10) != 0)
            throw std::invalid_argument("Scalar: malformed rational '" + std::string(s) + "'");
        if (v.get_den() == 0)
            throw std::invalid_argument("Scalar: zero denominator in '" + std::string(s) + "'");
        v.canonicalize();
        return Scalar(raw{}, std::move(v));
    }

    /// "p" when the denominator is 1, "p/q" otherwise. Round-trips bit-exactly.
    std::string to_string() const { return v_.get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    const mpq_class& value() const { return v_; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(raw{}, a.v_ + b.v_); }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(raw{}, a.v_ - b.v_); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(raw{}, a.v_ * b.v_); }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::invalid_argument("Scalar: division by zero");
        return Scalar(raw{}, a.v_ / b.v_);
    }
    Scalar operator-() const { return Scalar(raw{}, -v_); }

    Scalar& operator+=(const Scalar& o) { v_ += o.v_; return *this; }
    Scalar& operator-=(const Scalar& o) { v_ -= o.v_; return *this; }
    Scalar& operator*=(const Scalar& o) { v_ *= o.v_; return *this; }

    Scalar inverse() const {
        if (is_zero()) throw std::invalid_argument("Scalar: inverse of zero");
        return Scalar(raw{}, 1 / v_);
    }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return a.v_ != b.v_; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
        return os << s.v_;
    }

private:
    struct raw {};  // tag: value already canonical (gmp arithmetic keeps it so)
    Scalar(raw, mpq_class v) : v_(std::move(v)) {}

    static bool looks_like_rational(std::string_view s) {
        auto digits = [](std::string_view t) {
            if (t.empty()) return false;
            for (char c : t)
                if (c < '0' || c > '9') return false;
            return true;
        };
        if (!s.empty() && s.front() == '-') s.remove_prefix(1);
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return digits(s);
        return digits(s.substr(0, slash)) && digits(s.substr(slash + 1));
    }

    mpq_class v_;
};

}  // namespace sympquot
