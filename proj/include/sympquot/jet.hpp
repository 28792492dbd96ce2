#pragma once

#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympquot/scalar.hpp"

namespace sympquot {

/// Element of the local ring at a support point: a power series in the
/// local coordinate t truncated at a fixed order K. Coefficients are
/// exact rationals; every ring operation truncates at K. The zero jet
/// reports valuation K (never "infinity"), so valuations live in [0, K].
class Jet {
public:
    explicit Jet(int order) : c_(check_order(order)) {}
    Jet(int order, std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
        check_order(order);
        if (static_cast<int>(c_.size()) != order)
            throw std::invalid_argument("Jet: coefficient count does not match truncation order");
    }

    static Jet constant(int order, Scalar value) {
        Jet j(order);
        j.c_[0] = std::move(value);
        return j;
    }

    /// c * t^power (zero when power >= order).
    static Jet monomial(int order, int power, Scalar coeff = Scalar(1)) {
        Jet j(order);
        if (power < 0) throw std::invalid_argument("Jet: negative monomial power");
        if (power < order) j.c_[power] = std::move(coeff);
        return j;
    }

    static Jet variable(int order) { return monomial(order, 1); }

    int order() const { return static_cast<int>(c_.size()); }
    const Scalar& coeff(int i) const { return c_.at(i); }
    void set_coeff(int i, Scalar v) { c_.at(i) = std::move(v); }

    /// Index of the first nonzero coefficient; K for the zero jet.
    int valuation() const {
        for (int i = 0; i < order(); ++i)
            if (!c_[i].is_zero()) return i;
        return order();
    }

    bool is_zero() const { return valuation() == order(); }
    bool is_one() const {
        if (c_[0] != Scalar(1)) return false;
        for (int i = 1; i < order(); ++i)
            if (!c_[i].is_zero()) return false;
        return true;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        a.require_same_order(b);
        Jet r(a.order());
        for (int i = 0; i < a.order(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        a.require_same_order(b);
        Jet r(a.order());
        for (int i = 0; i < a.order(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
        return r;
    }
    Jet operator-() const {
        Jet r(order());
        for (int i = 0; i < order(); ++i) r.c_[i] = -c_[i];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        a.require_same_order(b);
        const int k = a.order();
        Jet r(k);
        for (int i = 0; i < k; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; i + j < k; ++j) {
                if (b.c_[j].is_zero()) continue;
                r.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return r;
    }
    friend Jet operator*(const Scalar& s, const Jet& a) {
        Jet r(a.order());
        if (s.is_zero()) return r;
        for (int i = 0; i < a.order(); ++i) r.c_[i] = s * a.c_[i];
        return r;
    }
    Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
    Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }

    friend bool operator==(const Jet& a, const Jet& b) {
        return a.order() == b.order() && a.c_ == b.c_;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    /// Multiplicative inverse of a unit (valuation 0), up to truncation.
    Jet unit_inverse() const {
        if (valuation() != 0)
            throw std::invalid_argument("Jet: unit_inverse of a non-unit (valuation > 0)");
        const int k = order();
        Jet r(k);
        const Scalar lead = c_[0].inverse();
        r.c_[0] = lead;
        for (int n = 1; n < k; ++n) {
            Scalar acc;
            for (int i = 1; i <= n; ++i) acc += c_[i] * r.c_[n - i];
            r.c_[n] = -lead * acc;
        }
        return r;
    }

    /// Exact division by t^a; requires valuation >= a. Top a coefficients
    /// of the result are zero (they are not determined by this jet).
    Jet shifted_down(int a) const {
        if (a < 0) throw std::invalid_argument("Jet: negative shift");
        if (valuation() < a)
            throw std::invalid_argument("Jet: shifted_down below valuation");
        Jet r(order());
        for (int i = a; i < order(); ++i) r.c_[i - a] = c_[i];
        return r;
    }

    /// Multiplication by t^a, truncating at K.
    Jet shifted_up(int a) const {
        if (a < 0) throw std::invalid_argument("Jet: negative shift");
        Jet r(order());
        for (int i = 0; i + a < order(); ++i) r.c_[i + a] = c_[i];
        return r;
    }

    /// Coefficients 0..a-1 only (the residue modulo t^a).
    Jet low_part(int a) const {
        Jet r(order());
        for (int i = 0; i < a && i < order(); ++i) r.c_[i] = c_[i];
        return r;
    }

    /// Same series re-truncated at a different order (pads with zeros when
    /// the new order is larger).
    Jet with_order(int new_order) const {
        check_order(new_order);
        Jet r(new_order);
        for (int i = 0; i < order() && i < new_order; ++i) r.c_[i] = c_[i];
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
        bool any = false;
        for (int i = 0; i < j.order(); ++i) {
            if (j.c_[i].is_zero()) continue;
            if (any) os << " + ";
            os << j.c_[i];
            if (i > 0) os << "*t^" << i;
            any = true;
        }
        if (!any) os << "0";
        return os;
    }

private:
    static int check_order(int order) {
        if (order < 1) throw std::invalid_argument("Jet: truncation order must be positive");
        return order;
    }
    void require_same_order(const Jet& o) const {
        if (order() != o.order())
            throw std::invalid_argument("Jet: mismatched truncation orders");
    }

    std::vector<Scalar> c_;
};

}  // namespace sympquot
