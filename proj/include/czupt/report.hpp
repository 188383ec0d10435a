#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "czupt/simulation.hpp"
#include "czupt/sweep.hpp"

namespace czupt {

/// Fixed column order: t, x[12], xhat[12], trP, u_lqr[4], omega_out[4],
/// u_out[4], zupt_flag, pos_update_flag, soc, v_term, i_draw, p_elec.
void write_trace_csv(std::ostream& os, const SimTrace& trace);
std::string trace_csv_header();

/// Non-finite numbers are written as the strings "inf" / "nan".
nlohmann::json metrics_to_json(const MetricsReport& m, bool include_series = false);
nlohmann::json sweep_to_json(const SweepResult& s);
nlohmann::json endurance_to_json(const EnduranceComparison& e);
/// A, B, K, L, observability ranks and closed-loop eigenvalues.
nlohmann::json design_to_json(const LqgDesign& d);

void write_sweep_csv(std::ostream& os, const SweepResult& s);

}  // namespace czupt
