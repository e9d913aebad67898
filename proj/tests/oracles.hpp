#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// |value - target| <= rel |target|
inline bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// Cyclic Jacobi rotations; eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-14, int max_sweeps = 100) {
    const auto n = a.rows();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= tol * a.norm()) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// <L, mL; 1/2, ms | J, mJ> for J = L +- 1/2 (closed form).
inline double cg_spin_half(int L, double mL, double ms, double J, double mJ) {
    if (std::abs(mL + ms - mJ) > 1e-12 || std::abs(mL) > L + 1e-12) return 0.0;
    const double d = 2.0 * L + 1.0;
    if (std::abs(J - (L + 0.5)) < 1e-12) {
        if (ms > 0) return std::sqrt((L + mJ + 0.5) / d);
        return std::sqrt((L - mJ + 0.5) / d);
    }
    if (ms > 0) return -std::sqrt((L - mJ + 0.5) / d);
    return std::sqrt((L + mJ + 0.5) / d);
}

// <l', m'| C^1_q |l, m> from explicit spherical-harmonic integrals.
inline double c1_orbital(int lp, int mp, int l, int m, int q) {
    if (mp != m + q) return 0.0;
    const double L = l, M = m;
    if (q == 0) {
        if (lp == l + 1) return std::sqrt(((L + 1) * (L + 1) - M * M) / ((2 * L + 1) * (2 * L + 3)));
        if (lp == l - 1) return std::sqrt((L * L - M * M) / ((2 * L - 1) * (2 * L + 1)));
        return 0.0;
    }
    // Condon-Shortley phases
    const double s = q == 1 ? 1.0 : -1.0;
    double v = 0.0;
    if (lp == l + 1) v = std::sqrt((L + s * M + 1) * (L + s * M + 2) / ((2 * L + 1) * (2 * L + 3)));
    else if (lp == l - 1) v = -std::sqrt((L - s * M) * (L - s * M - 1) / ((2 * L - 1) * (2 * L + 1)));
    else return 0.0;
    return v / std::sqrt(2.0);
}

// <l' j' mj'| C^1_q |l j mj> through the uncoupled |l ml>|ms> basis.
inline double c1_coupled(int lp, double jp, double mjp, int l, double j, double mj, int q) {
    double sum = 0.0;
    for (double ms : {-0.5, 0.5}) {
        const double ml = mj - ms;
        const double mlp = mjp - ms;
        if (std::abs(ml) > l || std::abs(mlp) > lp) continue;
        sum += cg_spin_half(lp, mlp, ms, jp, mjp) * cg_spin_half(l, ml, ms, j, mj) *
               c1_orbital(lp, static_cast<int>(std::lround(mlp)), l, static_cast<int>(std::lround(ml)), q);
    }
    return sum;
}

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Classic RK4 for i dpsi/dt = H(t) psi.
inline CVec rk4(const std::function<CMat(double)>& H, CVec psi, double t0, double t1, int steps) {
    const std::complex<double> mi(0.0, -1.0);
    const double h = (t1 - t0) / steps;
    for (int k = 0; k < steps; ++k) {
        const double t = t0 + k * h;
        const CVec k1 = mi * (H(t) * psi);
        const CVec k2 = mi * (H(t + h / 2) * (psi + h / 2 * k1));
        const CVec k3 = mi * (H(t + h / 2) * (psi + h / 2 * k2));
        const CVec k4 = mi * (H(t + h) * (psi + h * k3));
        psi += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

// Gauss-Hermite nodes and weights for weight exp(-x^2), Golub-Welsch.
inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        w[static_cast<std::size_t>(i)] = std::sqrt(M_PI) * v * v;
    }
}

// Composite Simpson on uniform samples (odd count).
inline double simpson(const std::vector<double>& f, double h) {
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

}  // namespace oracle
