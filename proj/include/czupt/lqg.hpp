#pragma once

#include <complex>
#include <vector>

#include "czupt/linmodel.hpp"
#include "czupt/mathcore.hpp"

namespace czupt {

struct CostWeights {
  MatX Q;  // 12x12 state penalty
  MatX R;  // 4x4 input penalty
};

/// Maximum tolerated excursions per state block and per input channel.
struct BrysonTolerances {
  double position = 0.1;          // m
  double velocity = 0.2;          // m/s
  double attitude = 0.1;          // rad
  double body_rate = 1.0;         // rad/s
  double thrust = VehicleParams{}.weight() / 2.0;  // N
  Vec3 torque{0.3, 0.3, 0.1};     // N m

  /// Same tolerances with the thrust tolerance set to m g / 2.
  static BrysonTolerances for_vehicle(const VehicleParams& p);
};

/// Diagonal Q_ii = 1 / x_max^2, R_jj = 1 / u_max^2.
CostWeights bryson_weights(const BrysonTolerances& tol);

struct CareOptions {
  int max_sign_iterations = 100;
  double sign_tolerance = 1e-13;
  int max_newton_iterations = 8;
};

/// Stabilizing solution S of A'S + SA - S B R^-1 B' S + Q = 0.
/// Matrix-sign-function solve on the Hamiltonian, polished with
/// Newton-Kleinman steps. Throws NotStabilizable.
MatX solve_care(const MatX& a, const MatX& b, const MatX& q, const MatX& r,
                const CareOptions& opt = {});

/// ||A'S + SA - S B R^-1 B' S + Q||_F / ||S||_F.
double care_residual(const MatX& a, const MatX& b, const MatX& q, const MatX& r, const MatX& s);

/// K = R^-1 B' S.
MatX lqr_gain(const MatX& s, const MatX& b, const MatX& r);

struct KalmanSolution {
  MatX L;
  MatX P;
};

/// Steady-state filter gain L = P C' V^-1 from the dual Riccati equation
/// A P + P A' - P C' V^-1 C P + W = 0. Throws NotDetectable.
KalmanSolution kalman_gain(const MatX& a, const MatX& c, const MatX& w, const MatX& v,
                           const CareOptions& opt = {});

/// Stabilizing solution of the discrete Riccati equation
/// X = A'XA - A'XB (R + B'XB)^-1 B'XA + Q by structure-preserving doubling.
/// Throws NotStabilizable when the iteration fails to converge.
MatX solve_dare(const MatX& a, const MatX& b, const MatX& q, const MatX& r, int max_iter = 60);

/// Steady-state gain of the discrete filter applying every row of C at
/// every step: prior covariance P from the dual DARE, L = P C'(C P C' + V)^-1.
/// Throws NotDetectable.
KalmanSolution discrete_kalman_gain(const MatX& ad, const MatX& c, const MatX& wd,
                                    const MatX& vd);

/// Solves A' X + X A + Q = 0 (Kronecker form; intended for small n).
MatX solve_lyapunov(const MatX& a, const MatX& q);

bool is_hurwitz(const MatX& m, double margin = 0.0);
double max_real_eigenvalue(const MatX& m);

struct GainSet {
  Mat4x12 K;
  MatX L;     // 12 x m, columns in the order of `sensors`
  Mat12 S;
  Mat12 P_ss;
  MeasurementSet sensors;
};

struct SeparationReport {
  std::vector<std::complex<double>> augmented;
  std::vector<std::complex<double>> controller;
  std::vector<std::complex<double>> estimator;
  double union_mismatch = 0.0;  // worst distance after one-to-one matching
  double max_real = 0.0;        // of the augmented spectrum
  bool controller_hurwitz = false;
  bool estimator_hurwitz = false;
};

/// Spectrum of [[A-BK, BK], [0, A-LC]] against eig(A-BK) and eig(A-LC).
SeparationReport separation_check(const MatX& a, const MatX& b, const MatX& c, const MatX& k,
                                  const MatX& l);

struct FilterState {
  Vec12 x_hat = Vec12::Zero();  // deviation from the equilibrium state
  Mat12 P = Mat12::Identity();
  long k = 0;
};

/// x_hat <- Ad x_hat + Bd du; P <- Ad P Ad' + Wd. `du` is the input
/// deviation u - u_e.
FilterState kf_predict(const FilterState& fs, const Vec4& du, const Mat12& ad,
                       const Mat12x4& bd, const Mat12& wd);

/// Kalman update with Joseph-form covariance. Throws SingularInnovation.
FilterState kf_update(const FilterState& fs, const VecX& y, const MeasMatrix& c, const MatX& v);

/// Joseph-form covariance update alone; returns the gain that was used.
MatX covariance_update(Mat12& p, const MeasMatrix& c, const MatX& v);

/// Joseph-form covariance of an estimator that applies an arbitrary gain G.
void covariance_update_with_gain(Mat12& p, const MeasMatrix& c, const MatX& v, const MatX& g);

/// Estimate correction with an externally fixed gain: x_hat += scale L (y - C x_hat).
void fixed_gain_correct(Vec12& x_hat, const VecX& y, const MeasMatrix& c, const MatX& l,
                        double scale);

inline Mat12 symmetrize(const Mat12& p) { return 0.5 * (p + p.transpose()); }

}  // namespace czupt
