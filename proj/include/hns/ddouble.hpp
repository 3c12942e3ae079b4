#pragma once

#include <cmath>

namespace hns {

// Compensated double-double value: unevaluated sum hi + lo carrying roughly
// 31 significant decimal digits. Enough head-room to evaluate the reduced
// invariant expressions at grid corners where |Q|/|R| reaches ~1e11 without
// losing the agreement checks in rounding noise.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double x) : hi(x), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b|
inline DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline DD operator+(DD a, DD b) {
    DD s = dd_detail::two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    const double q3 = r.hi / b.hi;
    DD q = dd_detail::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline bool operator<(DD a, DD b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DD a, DD b) { return b < a; }

inline DD sqrt(DD a) {
    if (a.hi == 0.0) return {0.0, 0.0};
    const double s = std::sqrt(a.hi);
    const DD s2 = dd_detail::two_prod(s, s);
    const double e = ((a.hi - s2.hi) - s2.lo + a.lo) / (2.0 * s);
    return dd_detail::quick_two_sum(s, e);
}

inline DD abs(DD a) { return a.hi < 0.0 ? -a : a; }

} // namespace hns
