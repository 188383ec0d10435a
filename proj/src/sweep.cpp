#include "czupt/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

#include "czupt/battery.hpp"

namespace czupt {

namespace {

const RunOptions kBatchRun{false, true};

MetricsReport run_one(const ScenarioConfig& cfg, const LqgDesign& design) {
  return run_closed_loop(cfg, design, kBatchRun).metrics;
}

}  // namespace

std::vector<MetricsReport> run_batch_serial(const std::vector<ScenarioConfig>& cfgs,
                                            const LqgDesign& design) {
  std::vector<MetricsReport> out;
  out.reserve(cfgs.size());
  for (const auto& c : cfgs) out.push_back(run_one(c, design));
  return out;
}

std::vector<MetricsReport> run_batch_parallel(const std::vector<ScenarioConfig>& cfgs,
                                              const LqgDesign& design) {
  std::vector<MetricsReport> out(cfgs.size());
  std::exception_ptr err = nullptr;
  const auto n = static_cast<long>(cfgs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run_one(cfgs[static_cast<std::size_t>(i)], design);
    } catch (...) {
#pragma omp critical(czupt_batch_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

namespace {

GammaRow aggregate(double gamma, bool czupt, std::vector<MetricsReport> reports) {
  GammaRow row;
  row.gamma = gamma;
  row.czupt = czupt;
  row.runs = static_cast<int>(reports.size());
  std::vector<double> ep, ea, us, ut;
  int div = 0;
  for (const auto& r : reports) {
    ep.push_back(r.err_pos_final);
    ea.push_back(r.err_att_final);
    us.push_back(r.u_sat_frac);
    ut.push_back(r.diverged ? std::numeric_limits<double>::infinity() : r.u_tot);
    row.zeta_ss_mean += r.zeta_ss.mean;
    row.zeta_ss_std += r.zeta_ss.std;
    row.power_avg += r.power_avg;
    row.current_avg += r.current_avg;
    if (r.diverged) ++div;
  }
  const double n = std::max(1, row.runs);
  row.err_pos_median = median(ep);
  row.err_att_median = median(ea);
  row.u_sat_median = median(us);
  row.u_tot_median = median(ut);
  row.zeta_ss_mean /= n;
  row.zeta_ss_std /= n;
  row.power_avg /= n;
  row.current_avg /= n;
  row.diverged_fraction = div / n;
  row.reports = std::move(reports);
  return row;
}

double safe_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return a / b;
}

}  // namespace

SweepResult sweep_gamma(const ScenarioConfig& base, const std::vector<double>& gammas,
                        const SweepOptions& opt) {
  std::vector<bool> variants;
  if (opt.run_unaided) variants.push_back(false);
  if (opt.run_aided) variants.push_back(true);

  std::vector<ScenarioConfig> cfgs;
  for (bool aided : variants) {
    for (double g : gammas) {
      for (int s = 0; s < opt.seeds; ++s) {
        ScenarioConfig c = base;
        c.gamma = g;
        c.seed = opt.first_seed + static_cast<std::uint64_t>(s);
        c.detector_enabled = aided;
        cfgs.push_back(c);
      }
    }
  }
  const LqgDesign design = design_lqg(base);
  std::vector<MetricsReport> all =
      opt.parallel ? run_batch_parallel(cfgs, design) : run_batch_serial(cfgs, design);

  SweepResult out;
  std::size_t idx = 0;
  for (bool aided : variants) {
    for (double g : gammas) {
      std::vector<MetricsReport> chunk(all.begin() + static_cast<long>(idx),
                                       all.begin() + static_cast<long>(idx + opt.seeds));
      idx += static_cast<std::size_t>(opt.seeds);
      (aided ? out.aided : out.unaided).push_back(aggregate(g, aided, std::move(chunk)));
    }
  }
  if (opt.run_unaided && opt.run_aided) {
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      const GammaRow& u = out.unaided[i];
      const GammaRow& a = out.aided[i];
      GammaRatio r;
      r.gamma = gammas[i];
      r.err_pos = safe_ratio(a.err_pos_median, u.err_pos_median);
      r.err_att = safe_ratio(a.err_att_median, u.err_att_median);
      r.u_sat = safe_ratio(a.u_sat_median, u.u_sat_median);
      r.u_tot = safe_ratio(a.u_tot_median, u.u_tot_median);
      r.zeta_ss = safe_ratio(a.zeta_ss_mean, u.zeta_ss_mean);
      out.ratios.push_back(r);
    }
  }
  return out;
}

EnduranceComparison endurance_comparison(const ScenarioConfig& base,
                                         const std::vector<double>& gammas,
                                         const SweepOptions& opt, double endurance_dt) {
  ScenarioConfig b = base;
  b.battery_enabled = true;
  SweepOptions o = opt;
  o.run_unaided = true;
  o.run_aided = true;
  const SweepResult sweep = sweep_gamma(b, gammas, o);
  const BatteryParams bp = b.effective_battery();

  auto row_for = [&](const GammaRow& g) {
    EnduranceRow r;
    r.gamma = g.gamma;
    r.czupt = g.czupt;
    r.power_avg = g.power_avg;
    r.current_avg = g.current_avg;
    const EnduranceResult e = endurance(g.power_avg, bp, bp.soc_floor, endurance_dt);
    r.t_safe = e.minutes;
    r.eta_eff = e.eta_eff;
    return r;
  };

  EnduranceComparison out;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const EnduranceRow u = row_for(sweep.unaided[i]);
    const EnduranceRow a = row_for(sweep.aided[i]);
    out.baseline.push_back(u);
    out.aided.push_back(a);
    out.power_reduction_pct.push_back(100.0 * (u.power_avg - a.power_avg) / u.power_avg);
    out.current_reduction_pct.push_back(100.0 * (u.current_avg - a.current_avg) / u.current_avg);
    out.t_safe_gain_min.push_back(a.t_safe - u.t_safe);
  }
  return out;
}

}  // namespace czupt
