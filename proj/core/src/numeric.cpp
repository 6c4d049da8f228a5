#include "geotrack/numeric.hpp"

#include <cmath>

#include "geotrack/errors.hpp"

namespace geotrack::numeric {

namespace {

// Degree-13 Pade coefficients (Higham, "The scaling and squaring method
// for the matrix exponential revisited").
constexpr double kPade13[] = {64764752532480000.0,
                              32382376266240000.0,
                              7771770303897600.0,
                              1187353796428800.0,
                              129060195264000.0,
                              10559470521600.0,
                              670442572800.0,
                              33522128640.0,
                              1323241920.0,
                              40840800.0,
                              960960.0,
                              16380.0,
                              182.0,
                              1.0};

// theta_13: largest scaled 1-norm for which the (13,13) approximant meets
// double precision.
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Mat expm_pade(const Mat& a) {
  const auto n = a.rows();
  if (n != a.cols()) throw Error("expm: matrix must be square");

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  Mat as = a;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    as /= std::pow(2.0, squarings);
  }

  const Mat id = Mat::Identity(n, n);
  const Mat a2 = as * as;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;

  const Mat u = as * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
                      kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
                      kPade13[1] * id);
  const Mat v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
                kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 +
                kPade13[0] * id;

  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

int rank_svd(const RMat& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<RMat> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

double trace_product(const RMat& a, const RMat& b) {
  return (a.array() * b.transpose().array()).sum();
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

double mod_period(double t, double period) {
  double r = t - period * std::floor(t / period);
  if (r >= period) r -= period;
  if (r < 0.0) r += period;
  return r;
}

}  // namespace geotrack::numeric
