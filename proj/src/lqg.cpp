#include "czupt/lqg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace czupt {

BrysonTolerances BrysonTolerances::for_vehicle(const VehicleParams& p) {
  BrysonTolerances t;
  t.thrust = p.weight() / 2.0;
  return t;
}

CostWeights bryson_weights(const BrysonTolerances& tol) {
  const double vals[] = {tol.position, tol.velocity, tol.attitude, tol.body_rate,
                         tol.thrust,   tol.torque(0), tol.torque(1), tol.torque(2)};
  for (double v : vals) {
    if (!(v != 0.0) || !std::isfinite(v)) throw ConfigError("Bryson tolerances must be nonzero");
  }
  auto inv_sq = [](double v) { return 1.0 / (v * v); };
  CostWeights w;
  VecX q(12);
  q << VecX::Constant(3, inv_sq(tol.position)), VecX::Constant(3, inv_sq(tol.velocity)),
      VecX::Constant(3, inv_sq(tol.attitude)), VecX::Constant(3, inv_sq(tol.body_rate));
  w.Q = q.asDiagonal();
  w.R = Vec4(inv_sq(tol.thrust), inv_sq(tol.torque(0)), inv_sq(tol.torque(1)),
             inv_sq(tol.torque(2)))
            .asDiagonal();
  return w;
}

double care_residual(const MatX& a, const MatX& b, const MatX& q, const MatX& r, const MatX& s) {
  const MatX g = b * r.llt().solve(b.transpose());
  const MatX res = a.transpose() * s + s * a - s * g * s + q;
  const double scale = std::max(s.norm(), std::numeric_limits<double>::min());
  return res.norm() / scale;
}

MatX lqr_gain(const MatX& s, const MatX& b, const MatX& r) {
  return r.llt().solve(b.transpose() * s);
}

MatX solve_lyapunov(const MatX& a, const MatX& q) {
  const Eigen::Index n = a.rows();
  const MatX eye = MatX::Identity(n, n);
  const MatX at = a.transpose();
  MatX kron(n * n, n * n);
  // vec(A'X + XA) = (I kron A' + A' kron I) vec(X), column-major vec.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) = eye(i, j) * at + at(i, j) * eye;
    }
  }
  const VecX rhs = -Eigen::Map<const VecX>(q.data(), n * n);
  const VecX x = kron.partialPivLu().solve(rhs);
  MatX out = Eigen::Map<const MatX>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

double max_real_eigenvalue(const MatX& m) {
  Eigen::EigenSolver<MatX> es(m, false);
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const MatX& m, double margin) { return max_real_eigenvalue(m) < -margin; }

namespace {

// Newton iteration for sign(H) with determinant scaling; the scale is
// taken in the log domain so large Hamiltonians cannot overflow it.
bool matrix_sign(MatX& z, const CareOptions& opt) {
  const double n = static_cast<double>(z.rows());
  for (int it = 0; it < opt.max_sign_iterations; ++it) {
    Eigen::PartialPivLU<MatX> lu(z);
    const VecX d = lu.matrixLU().diagonal().cwiseAbs();
    if (!((d.array() > 0.0).all())) return false;
    const double c = std::exp(d.array().log().sum() / n);
    const MatX next = 0.5 * (z / c + c * lu.inverse());
    if (!next.allFinite()) return false;
    const double delta = (next - z).lpNorm<1>() / next.lpNorm<1>();
    z = next;
    if (delta < opt.sign_tolerance) return true;
  }
  // A slowly converging iterate is still handed on; the Newton-Kleinman
  // pass and the stability check decide whether it is usable.
  return true;
}

}  // namespace

MatX solve_care(const MatX& a, const MatX& b, const MatX& q, const MatX& r,
                const CareOptions& opt) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != b.cols() || r.cols() != b.cols()) {
    throw LengthMismatch("solve_care: inconsistent matrix dimensions");
  }
  Eigen::LLT<MatX> r_llt(r);
  if (r_llt.info() != Eigen::Success) throw ConfigError("solve_care: R must be positive definite");
  const MatX g = b * r_llt.solve(b.transpose());

  MatX h(2 * n, 2 * n);
  h << a, -g, -q, -a.transpose();
  MatX z = h;
  if (!matrix_sign(z, opt)) throw NotStabilizable("Hamiltonian has imaginary-axis eigenvalues");

  MatX lhs(2 * n, n), rhs(2 * n, n);
  lhs << z.topRightCorner(n, n), z.bottomRightCorner(n, n) + MatX::Identity(n, n);
  rhs << z.topLeftCorner(n, n) + MatX::Identity(n, n), z.bottomLeftCorner(n, n);
  MatX s = lhs.colPivHouseholderQr().solve(-rhs);
  s = 0.5 * (s + s.transpose());
  if (!s.allFinite()) throw NotStabilizable("Riccati solution is not finite");

  double res = care_residual(a, b, q, r, s);
  for (int it = 0; it < opt.max_newton_iterations && res > 1e-15; ++it) {
    const MatX k = r_llt.solve(b.transpose() * s);
    const MatX ak = a - b * k;
    if (!is_hurwitz(ak)) break;
    const MatX next = solve_lyapunov(ak, q + k.transpose() * r * k);
    const double next_res = care_residual(a, b, q, r, next);
    if (!(next_res < res)) break;
    s = next;
    res = next_res;
  }

  const MatX k = r_llt.solve(b.transpose() * s);
  if (!is_hurwitz(a - b * k)) throw NotStabilizable("no stabilizing Riccati solution");
  return s;
}

KalmanSolution kalman_gain(const MatX& a, const MatX& c, const MatX& w, const MatX& v,
                           const CareOptions& opt) {
  KalmanSolution out;
  try {
    out.P = solve_care(a.transpose(), c.transpose(), w, v, opt);
  } catch (const NotStabilizable& e) {
    throw NotDetectable(std::string("filter Riccati: ") + e.what());
  }
  out.L = v.llt().solve(c * out.P).transpose();
  return out;
}

MatX solve_dare(const MatX& a, const MatX& b, const MatX& q, const MatX& r, int max_iter) {
  const Eigen::Index n = a.rows();
  Eigen::LLT<MatX> r_llt(r);
  if (r_llt.info() != Eigen::Success) throw ConfigError("solve_dare: R must be positive definite");
  const MatX eye = MatX::Identity(n, n);
  MatX ak = a;
  MatX gk = b * r_llt.solve(b.transpose());
  MatX hk = q;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::PartialPivLU<MatX> lu(eye + gk * hk);
    const MatX w1 = lu.solve(ak);               // (I + G H)^-1 A
    const MatX w2 = lu.solve(gk);               // (I + G H)^-1 G
    const MatX h_next = hk + ak.transpose() * hk * w1;
    gk = gk + ak * w2 * ak.transpose();
    ak = ak * w1;
    const double delta = (h_next - hk).norm() / std::max(1.0, h_next.norm());
    hk = 0.5 * (h_next + h_next.transpose());
    gk = 0.5 * (gk + gk.transpose());
    if (!hk.allFinite()) break;
    if (delta < 1e-14) return hk;
  }
  throw NotStabilizable("discrete Riccati doubling did not converge");
}

KalmanSolution discrete_kalman_gain(const MatX& ad, const MatX& c, const MatX& wd,
                                    const MatX& vd) {
  KalmanSolution out;
  try {
    out.P = solve_dare(ad.transpose(), c.transpose(), wd, vd);
  } catch (const NotStabilizable& e) {
    throw NotDetectable(std::string("discrete filter Riccati: ") + e.what());
  }
  const MatX s = c * out.P * c.transpose() + vd;
  out.L = s.ldlt().solve(c * out.P).transpose();
  return out;
}

namespace {

std::vector<std::complex<double>> eigs(const MatX& m) {
  Eigen::EigenSolver<MatX> es(m, false);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

SeparationReport separation_check(const MatX& a, const MatX& b, const MatX& c, const MatX& k,
                                  const MatX& l) {
  const Eigen::Index n = a.rows();
  const MatX acl = a - b * k;
  const MatX aest = a - l * c;
  MatX aug = MatX::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = acl;
  aug.topRightCorner(n, n) = b * k;
  aug.bottomRightCorner(n, n) = aest;

  SeparationReport rep;
  rep.augmented = eigs(aug);
  rep.controller = eigs(acl);
  rep.estimator = eigs(aest);

  std::vector<std::complex<double>> pool = rep.controller;
  pool.insert(pool.end(), rep.estimator.begin(), rep.estimator.end());
  std::vector<bool> used(pool.size(), false);
  rep.max_real = -std::numeric_limits<double>::infinity();
  for (const auto& ev : rep.augmented) {
    rep.max_real = std::max(rep.max_real, ev.real());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(ev - pool[i]);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    used[best_i] = true;
    rep.union_mismatch = std::max(rep.union_mismatch, best);
  }
  auto hurwitz = [](const std::vector<std::complex<double>>& v) {
    return std::all_of(v.begin(), v.end(), [](auto z) { return z.real() < 0.0; });
  };
  rep.controller_hurwitz = hurwitz(rep.controller);
  rep.estimator_hurwitz = hurwitz(rep.estimator);
  return rep;
}

FilterState kf_predict(const FilterState& fs, const Vec4& du, const Mat12& ad,
                       const Mat12x4& bd, const Mat12& wd) {
  FilterState out;
  out.x_hat = ad * fs.x_hat + bd * du;
  out.P = symmetrize(ad * fs.P * ad.transpose() + wd);
  out.k = fs.k + 1;
  return out;
}

MatX covariance_update(Mat12& p, const MeasMatrix& c, const MatX& v) {
  const MatX pct = p * c.transpose();
  const MatX s = c * pct + v;
  Eigen::LDLT<MatX> ldlt(s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw SingularInnovation("innovation covariance is not positive definite");
  }
  const MatX gain = ldlt.solve(pct.transpose()).transpose();
  const Mat12 ikc = Mat12::Identity() - gain * c;
  p = symmetrize(ikc * p * ikc.transpose() + gain * v * gain.transpose());
  return gain;
}

void covariance_update_with_gain(Mat12& p, const MeasMatrix& c, const MatX& v, const MatX& g) {
  const Mat12 ikc = Mat12::Identity() - g * c;
  p = symmetrize(ikc * p * ikc.transpose() + g * v * g.transpose());
}

FilterState kf_update(const FilterState& fs, const VecX& y, const MeasMatrix& c, const MatX& v) {
  if (y.size() != c.rows() || v.rows() != c.rows() || v.cols() != c.rows()) {
    throw LengthMismatch("kf_update: measurement dimensions disagree");
  }
  FilterState out = fs;
  const MatX gain = covariance_update(out.P, c, v);
  out.x_hat += gain * (y - c * fs.x_hat);
  return out;
}

void fixed_gain_correct(Vec12& x_hat, const VecX& y, const MeasMatrix& c, const MatX& l,
                        double scale) {
  x_hat += scale * l * (y - c * x_hat);
}

}  // namespace czupt
