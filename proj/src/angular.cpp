#include "rydberg/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "rydberg/errors.hpp"
#include "rydberg/radial.hpp"

namespace rydberg {

namespace {

constexpr int kMaxFactorial = 170;

const std::array<double, kMaxFactorial + 1>& factorials() {
    static const auto table = [] {
        std::array<double, kMaxFactorial + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

// Factorial of a quantity given as twice its value; must be a non-negative integer.
double fact2(int twice) {
    if (twice < 0 || twice % 2 != 0) return std::nan("");
    const int n = twice / 2;
    if (n > kMaxFactorial) throw DomainError("angular momentum too large for factorial table");
    return factorials()[n];
}

double sign_of(int exponent) { return (exponent % 2 == 0) ? 1.0 : -1.0; }

bool triangle(int a, int b, int c) {
    return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0;
}

double delta(int a, int b, int c) {
    return fact2(a + b - c) * fact2(a - b + c) * fact2(-a + b + c) / fact2(a + b + c + 2);
}

}  // namespace

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
    if (m1 + m2 + m3 != 0) return 0.0;
    if (!triangle(j1, j2, j3)) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
    if ((j1 + m1) % 2 || (j2 + m2) % 2 || (j3 + m3) % 2) return 0.0;

    const double pre = std::sqrt(delta(j1, j2, j3) * fact2(j1 + m1) * fact2(j1 - m1) * fact2(j2 + m2) *
                                 fact2(j2 - m2) * fact2(j3 + m3) * fact2(j3 - m3));
    // k runs over integers, here in units of two.
    const int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
    const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
    double sum = 0.0;
    for (int k = kmin; k <= kmax; k += 2) {
        const double den = fact2(k) * fact2(j3 - j2 + k + m1) * fact2(j3 - j1 + k - m2) *
                           fact2(j1 + j2 - j3 - k) * fact2(j1 - k - m1) * fact2(j2 - k + m2);
        sum += sign_of(k / 2) / den;
    }
    return sign_of((j1 - j2 - m3) / 2) * pre * sum;
}

double wigner_6j(int a, int b, int c, int d, int e, int f) {
    if (!triangle(a, b, c) || !triangle(a, e, f) || !triangle(d, b, f) || !triangle(d, e, c)) return 0.0;
    const double pre = std::sqrt(delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c));
    const int tmin = std::max({a + b + c, a + e + f, d + b + f, d + e + c});
    const int tmax = std::min({a + b + d + e, a + c + d + f, b + c + e + f});
    double sum = 0.0;
    for (int t = tmin; t <= tmax; t += 2) {
        const double den = fact2(t - a - b - c) * fact2(t - a - e - f) * fact2(t - d - b - f) *
                           fact2(t - d - e - c) * fact2(a + b + d + e - t) * fact2(a + c + d + f - t) *
                           fact2(b + c + e + f - t);
        sum += sign_of(t / 2) * fact2(t + 2) / den;
    }
    return pre * sum;
}

double reduced_c1(int L1, HalfInteger J1, int L2, HalfInteger J2) {
    if (std::abs(L1 - L2) != 1) return 0.0;
    const int tj1 = J1.twice, tj2 = J2.twice;
    // <L1 J1 || C1 || L2 J2> with s = 1/2 decoupled
    const double six = wigner_6j(2 * L1, tj1, 1, tj2, 2 * L2, 2);
    const double three = wigner_3j(2 * L1, 2, 2 * L2, 0, 0, 0);
    const double phase = sign_of((2 * L1 + 1 + tj2 + 2) / 2) * sign_of(L1);
    return phase * std::sqrt((tj1 + 1.0) * (tj2 + 1.0)) * six * std::sqrt((2.0 * L1 + 1.0) * (2.0 * L2 + 1.0)) *
           three;
}

double angular_factor(const RydbergState& a, const RydbergState& b, int q) {
    if (q < -1 || q > 1) throw DomainError("spherical component must be -1, 0 or 1");
    if (std::abs(a.L() - b.L()) != 1) return 0.0;
    const int tj1 = a.J().twice, tm1 = a.mJ().twice;
    const int tj2 = b.J().twice, tm2 = b.mJ().twice;
    const double three = wigner_3j(tj1, 2, tj2, -tm1, 2 * q, tm2);
    if (three == 0.0) return 0.0;
    return sign_of((tj1 - tm1) / 2) * three * reduced_c1(a.L(), a.J(), b.L(), b.J());
}

double angular_factor(const RydbergState& a, const RydbergState& b, Polarization p) {
    return angular_factor(a, b, static_cast<int>(p));
}

double line_strength_factor(int L_upper, HalfInteger J_upper, int L_lower, HalfInteger J_lower) {
    const double red = reduced_c1(L_upper, J_upper, L_lower, J_lower);
    return red * red / (J_upper.twice + 1.0);
}

double dipole_matrix_element(const RydbergState& a, const RydbergState& b, int q) {
    const double ang = angular_factor(a, b, q);
    if (ang == 0.0) return 0.0;
    return ang * radial_matrix_element(a, b);
}

}  // namespace rydberg
