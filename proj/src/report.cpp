#include "czupt/report.hpp"

#include <cmath>
#include <iomanip>

#include <Eigen/Eigenvalues>

namespace czupt {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json matrix_json(const MatX& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(number(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json eigen_json(const MatX& m) {
  Eigen::EigenSolver<MatX> es(m, false);
  json out = json::array();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    out.push_back({es.eigenvalues()(i).real(), es.eigenvalues()(i).imag()});
  }
  return out;
}

template <typename V>
void put(std::ostream& os, const V& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << v(i);
}

}  // namespace

std::string trace_csv_header() {
  std::string h = "t";
  const char* names[] = {"x", "y", "z", "u", "v", "w", "phi", "theta", "psi", "p", "q", "r"};
  for (const char* n : names) h += std::string(",") + n;
  for (const char* n : names) h += std::string(",hat_") + n;
  h += ",trP,u_lqr_f,u_lqr_tx,u_lqr_ty,u_lqr_tz";
  h += ",omega_out_1,omega_out_2,omega_out_3,omega_out_4";
  h += ",u_out_f,u_out_tx,u_out_ty,u_out_tz";
  h += ",zupt_flag,pos_update_flag,soc,v_term,i_draw,p_elec";
  return h;
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  os << trace_csv_header() << '\n';
  os << std::setprecision(10);
  for (const auto& r : trace.records) {
    os << r.t;
    put(os, r.x);
    put(os, r.x_hat);
    os << ',' << r.trace_p;
    put(os, r.u_lqr);
    put(os, r.omega_out);
    put(os, r.u_out);
    os << ',' << int(r.zupt) << ',' << int(r.pos_update) << ',' << r.soc << ',' << r.v_term << ','
       << r.i_draw << ',' << r.p_elec << '\n';
  }
}

json metrics_to_json(const MetricsReport& m, bool include_series) {
  json j = {{"u_sat", number(m.u_sat_frac)},
            {"u_sat_input", number(m.u_sat_input_frac)},
            {"u_tot", number(m.u_tot)},
            {"zeta_ss_mean", number(m.zeta_ss.mean)},
            {"zeta_ss_std", number(m.zeta_ss.std)},
            {"err_pos_final_m", number(m.err_pos_final)},
            {"err_att_final_deg", number(m.err_att_final)},
            {"diverged", m.diverged},
            {"divergence_reason", m.divergence_reason},
            {"steps", m.steps_completed},
            {"position_updates", m.position_updates},
            {"detections", m.detections},
            {"zupt_updates", m.zupt_count},
            {"power_avg_w", number(m.power_avg)},
            {"current_avg_a", number(m.current_avg)},
            {"final_soc", number(m.final_soc)}};
  if (include_series) {
    json z = json::array();
    for (double v : m.zeta) z.push_back(number(v));
    j["zeta"] = z;
  }
  return j;
}

namespace {

json row_json(const GammaRow& r) {
  return {{"gamma", r.gamma},
          {"czupt", r.czupt},
          {"runs", r.runs},
          {"err_pos_median_m", number(r.err_pos_median)},
          {"err_att_median_deg", number(r.err_att_median)},
          {"u_sat_median", number(r.u_sat_median)},
          {"u_tot_median", number(r.u_tot_median)},
          {"zeta_ss_mean", number(r.zeta_ss_mean)},
          {"zeta_ss_std", number(r.zeta_ss_std)},
          {"diverged_fraction", r.diverged_fraction},
          {"power_avg_w", number(r.power_avg)},
          {"current_avg_a", number(r.current_avg)}};
}

}  // namespace

json sweep_to_json(const SweepResult& s) {
  json j;
  j["unaided"] = json::array();
  for (const auto& r : s.unaided) j["unaided"].push_back(row_json(r));
  j["aided"] = json::array();
  for (const auto& r : s.aided) j["aided"].push_back(row_json(r));
  j["ratios"] = json::array();
  for (const auto& r : s.ratios) {
    j["ratios"].push_back({{"gamma", r.gamma},
                           {"err_pos", number(r.err_pos)},
                           {"err_att", number(r.err_att)},
                           {"u_sat", number(r.u_sat)},
                           {"u_tot", number(r.u_tot)},
                           {"zeta_ss", number(r.zeta_ss)}});
  }
  return j;
}

void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  os << "gamma,czupt,runs,err_pos_median_m,err_att_median_deg,u_sat_median,u_tot_median,"
        "zeta_ss_mean,zeta_ss_std,diverged_fraction,power_avg_w,current_avg_a\n";
  auto emit = [&os](const GammaRow& r) {
    os << r.gamma << ',' << int(r.czupt) << ',' << r.runs << ',' << r.err_pos_median << ','
       << r.err_att_median << ',' << r.u_sat_median << ',' << r.u_tot_median << ','
       << r.zeta_ss_mean << ',' << r.zeta_ss_std << ',' << r.diverged_fraction << ','
       << r.power_avg << ',' << r.current_avg << '\n';
  };
  for (const auto& r : s.unaided) emit(r);
  for (const auto& r : s.aided) emit(r);
}

json endurance_to_json(const EnduranceComparison& e) {
  auto row = [](const EnduranceRow& r) {
    return json{{"gamma", r.gamma},           {"czupt", r.czupt},
                {"power_avg_w", number(r.power_avg)}, {"current_avg_a", number(r.current_avg)},
                {"t_safe_min", number(r.t_safe)},     {"eta_eff_min_per_wh", number(r.eta_eff)}};
  };
  json j;
  j["baseline"] = json::array();
  for (const auto& r : e.baseline) j["baseline"].push_back(row(r));
  j["czupt"] = json::array();
  for (const auto& r : e.aided) j["czupt"].push_back(row(r));
  j["power_reduction_pct"] = e.power_reduction_pct;
  j["current_reduction_pct"] = e.current_reduction_pct;
  j["t_safe_gain_min"] = e.t_safe_gain_min;
  return j;
}

json design_to_json(const LqgDesign& d) {
  json j;
  j["A"] = matrix_json(d.A);
  j["B"] = matrix_json(d.B);
  j["K"] = matrix_json(d.gains.K);
  j["L"] = matrix_json(d.gains.L);
  if (d.L_d.size() > 0) j["L_discrete"] = matrix_json(d.L_d);
  j["Q_diag"] = matrix_json(d.weights.Q.diagonal().transpose());
  j["R_diag"] = matrix_json(d.weights.R.diagonal().transpose());
  j["care_residual_control"] = d.care_residual_control;
  j["care_residual_filter"] = d.care_residual_filter;
  j["observability_rank"] = {
      {"position", observability_rank(d.A, measurement_matrix({MeasurementKind::Position}))},
      {"velocity", observability_rank(d.A, measurement_matrix({MeasurementKind::Velocity}))},
      {"position_velocity",
       observability_rank(d.A, measurement_matrix({MeasurementKind::Position,
                                                   MeasurementKind::Velocity}))},
      {"position_attitude",
       observability_rank(d.A, measurement_matrix({MeasurementKind::Position,
                                                   MeasurementKind::Attitude}))}};
  j["eig_A"] = eigen_json(d.A);
  j["eig_A_minus_BK"] = eigen_json(d.A - d.B * d.gains.K);
  if (d.gains.L.cols() > 0) j["eig_A_minus_LC"] = eigen_json(d.A - d.gains.L * d.C_syn);
  return j;
}

}  // namespace czupt
