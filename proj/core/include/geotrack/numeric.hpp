#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace geotrack {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

namespace numeric {

/// Dense matrix exponential: scaling-and-squaring with a degree-13 Pade core.
/// Relative accuracy ~1e-15 for scaled norms, well inside the 1e-13 target
/// for ||A|| <= 10.
Mat expm_pade(const Mat& a);

/// Rank of a real matrix from its singular values, thresholded at
/// tol * largest singular value.
int rank_svd(const RMat& a, double tol);

/// tr(a * b) without forming the product.
double trace_product(const RMat& a, const RMat& b);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

/// t reduced to [0, period).
double mod_period(double t, double period);

}  // namespace numeric
}  // namespace geotrack
