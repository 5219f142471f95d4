#pragma once

// CSV outputs. Numbers use 17 significant digits; every file starts with a
// header row.
//
//   series:      t,dt,mass,sup_u,sup_v,l2_u,lgamma_u,status
//   records:     chi,mu,p,replica,outcome,prediction,final_status,sup_u_max,
//                t_final,steps,theta0_est,note
//   regime map:  chi,mu,p,replicas,outcome,prediction,agree
//   timings:     chi,mu,p,replica,wall_time

#include <string>
#include <vector>

#include "kellerscope/stepper.hpp"
#include "kellerscope/sweep.hpp"

namespace kellerscope {

std::string format_number(double x);

std::string format_series_csv(const std::vector<Sample>& series);
std::string format_records_csv(const std::vector<RunRecord>& records);
std::string format_regime_csv(const RegimeMap& map);
std::string format_timings_csv(const std::vector<RunRecord>& records);

// Throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

} // namespace kellerscope
