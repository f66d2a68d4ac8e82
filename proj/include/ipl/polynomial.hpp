#pragma once

// Coefficient-space algebra for spinors of the form
//   (p(xi), q(xi)) * exp(-xi^2 / (2 g))
// with p, q stored as ascending monomial coefficients.

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace ipl {

template <typename Scalar>
using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Pair of polynomials sharing one Gaussian envelope.
template <typename Scalar>
struct BasicCoeffSpinor {
    Coeffs<Scalar> psi1;
    Coeffs<Scalar> psi2;

    Eigen::Index size() const { return std::max(psi1.size(), psi2.size()); }
};

using CoeffSpinor = BasicCoeffSpinor<double>;

namespace poly {

template <typename Scalar>
Coeffs<Scalar> padded(const Coeffs<Scalar>& p, Eigen::Index n) {
    Coeffs<Scalar> out = Coeffs<Scalar>::Zero(std::max(n, p.size()));
    out.head(p.size()) = p;
    return out;
}

template <typename Scalar>
Coeffs<Scalar> derivative(const Coeffs<Scalar>& p) {
    if (p.size() <= 1) return Coeffs<Scalar>::Zero(1);
    Coeffs<Scalar> out(p.size() - 1);
    for (Eigen::Index k = 1; k < p.size(); ++k) out(k - 1) = Scalar(k) * p(k);
    return out;
}

/// xi * p(xi)
template <typename Scalar>
Coeffs<Scalar> times_xi(const Coeffs<Scalar>& p) {
    Coeffs<Scalar> out = Coeffs<Scalar>::Zero(p.size() + 1);
    out.tail(p.size()) = p;
    return out;
}

/// p(-xi)
template <typename Scalar>
Coeffs<Scalar> reflected(const Coeffs<Scalar>& p) {
    Coeffs<Scalar> out = p;
    for (Eigen::Index k = 1; k < out.size(); k += 2) out(k) = -out(k);
    return out;
}

template <typename Scalar>
Scalar evaluate(const Coeffs<Scalar>& p, Scalar x) {
    Scalar acc(0);
    for (Eigen::Index k = p.size(); k-- > 0;) acc = acc * x + p(k);
    return acc;
}

/// Integral of xi^k exp(-xi^2/g) over the real line:
/// (k-1)!! (g/2)^(k/2) sqrt(pi g) for even k, 0 for odd k.
template <typename Scalar>
Scalar gaussian_moment(int k, Scalar g) {
    using std::sqrt;
    if (k % 2 != 0) return Scalar(0);
    Scalar m = sqrt(Scalar(std::numbers::pi) * g);
    for (int j = 1; j < k; j += 2) m *= Scalar(j) * g / Scalar(2);
    return m;
}

/// Integral of p(xi) r(xi) exp(-xi^2/g).
template <typename Scalar>
Scalar gaussian_inner(const Coeffs<Scalar>& p, const Coeffs<Scalar>& r, Scalar g) {
    const Eigen::Index top = p.size() + r.size();
    Coeffs<Scalar> moments(std::max<Eigen::Index>(top, 1));
    for (Eigen::Index k = 0; k < moments.size(); ++k) moments(k) = gaussian_moment<Scalar>(int(k), g);
    Scalar acc(0);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        for (Eigen::Index j = (i % 2); j < r.size(); j += 2) acc += p(i) * r(j) * moments(i + j);
    return acc;
}

}  // namespace poly

/// Spinor inner product <u, v> = int (u1 v1 + u2 v2) exp(-xi^2/g).
template <typename Scalar>
Scalar spinor_inner(const BasicCoeffSpinor<Scalar>& u, const BasicCoeffSpinor<Scalar>& v, Scalar g) {
    return poly::gaussian_inner(u.psi1, v.psi1, g) + poly::gaussian_inner(u.psi2, v.psi2, g);
}

/// Coefficientwise u - s v, padded to the longer operand.
template <typename Scalar>
BasicCoeffSpinor<Scalar> axpy_difference(const BasicCoeffSpinor<Scalar>& u, Scalar s,
                                         const BasicCoeffSpinor<Scalar>& v) {
    const Eigen::Index n = std::max(u.size(), v.size());
    return {poly::padded(u.psi1, n) - s * poly::padded(v.psi1, n),
            poly::padded(u.psi2, n) - s * poly::padded(v.psi2, n)};
}

template <typename Scalar>
Scalar max_abs_coeff(const BasicCoeffSpinor<Scalar>& u) {
    Scalar m(0);
    if (u.psi1.size()) m = std::max(m, Scalar(u.psi1.cwiseAbs().maxCoeff()));
    if (u.psi2.size()) m = std::max(m, Scalar(u.psi2.cwiseAbs().maxCoeff()));
    return m;
}

/// Action of
///   [ -xi            lambda - g d/dxi ]
///   [ lambda + g d/dxi          xi    ]
/// on (p, q) exp(-xi^2/(2g)), returned as the polynomial pair multiplying
/// the same Gaussian. Since g d/dxi (p e) = (g p' - xi p) e this is exact:
///   row1 = -xi p + lambda q - g q' + xi q
///   row2 = lambda p + g p' - xi p + xi q
template <typename Scalar>
BasicCoeffSpinor<Scalar> apply_linear_hamiltonian(Scalar lambda, Scalar g,
                                                  const BasicCoeffSpinor<Scalar>& s) {
    using namespace poly;
    const Eigen::Index n = s.size() + 1;
    const Coeffs<Scalar> p = padded(s.psi1, n - 1);
    const Coeffs<Scalar> q = padded(s.psi2, n - 1);
    const Coeffs<Scalar> xi_diff = padded(Coeffs<Scalar>(times_xi(Coeffs<Scalar>(q - p))), n);
    BasicCoeffSpinor<Scalar> out;
    out.psi1 = xi_diff + lambda * padded(q, n) - g * padded(derivative(q), n);
    out.psi2 = xi_diff + lambda * padded(p, n) + g * padded(derivative(p), n);
    return out;
}

/// Action of the real part W of the chiral partner operator V = i W,
///   W = [ g d/dxi    xi      ]
///       [ -xi      -g d/dxi  ]
/// on (p, q) exp(-xi^2/(2g)):
///   row1 = g p' - xi p + xi q
///   row2 = -xi p - g q' + xi q
template <typename Scalar>
BasicCoeffSpinor<Scalar> apply_partner_real(Scalar g, const BasicCoeffSpinor<Scalar>& s) {
    using namespace poly;
    const Eigen::Index n = s.size() + 1;
    const Coeffs<Scalar> p = padded(s.psi1, n - 1);
    const Coeffs<Scalar> q = padded(s.psi2, n - 1);
    const Coeffs<Scalar> xi_diff = padded(Coeffs<Scalar>(times_xi(Coeffs<Scalar>(q - p))), n);
    BasicCoeffSpinor<Scalar> out;
    out.psi1 = g * padded(derivative(p), n) + xi_diff;
    out.psi2 = xi_diff - g * padded(derivative(q), n);
    return out;
}

/// Pi_xi: (p(xi), q(xi)) -> (p(-xi), q(-xi)).
template <typename Scalar>
BasicCoeffSpinor<Scalar> reflect_xi(const BasicCoeffSpinor<Scalar>& s) {
    return {poly::reflected(s.psi1), poly::reflected(s.psi2)};
}

/// P = Pi_xi sigma_x: (p(xi), q(xi)) -> (q(-xi), p(-xi)).
template <typename Scalar>
BasicCoeffSpinor<Scalar> parity_sigma_x(const BasicCoeffSpinor<Scalar>& s) {
    return {poly::reflected(s.psi2), poly::reflected(s.psi1)};
}

}  // namespace ipl
