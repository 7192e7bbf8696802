#include "pwell/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace pwell {

const char* const kTrajectoryCsvHeader =
    "t,E,I,J,kinetic,boundary_kinetic,grad_sq,lp_term,trace_u,diss_interior,diss_boundary,theta,dt";

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view text, const char* context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::runtime_error(std::string("CSV parse error in field '") + std::string(text) +
                             "' (" + context + ")");
  }
  return value;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace

std::string trajectory_csv_string(const Trajectory& trajectory) {
  std::string out(kTrajectoryCsvHeader);
  out.push_back('\n');
  for (const TrajectoryRow& row : trajectory.rows) {
    const EnergySnapshot& s = row.snap;
    out += format_double(s.t);
    out += ',';
    out += format_double(s.E);
    out += ',';
    out += format_double(s.I);
    out += ',';
    out += format_double(s.J);
    out += ',';
    out += format_double(s.kinetic);
    out += ',';
    out += format_double(s.boundary_kinetic);
    out += ',';
    out += format_double(s.grad_sq);
    out += ',';
    out += format_double(s.lp_term);
    out += ',';
    out += format_double(s.trace_u);
    out += ',';
    out += format_double(row.diss_interior);
    out += ',';
    out += format_double(row.diss_boundary);
    out += ',';
    out += format_double(row.theta);
    out += ',';
    out += format_double(s.dt_used);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
  write_file(path, trajectory_csv_string(trajectory));
}

Trajectory read_trajectory_csv(const std::string& path, double horizon_T) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");

  Trajectory traj;
  traj.horizon_T = horizon_T;
  traj.exact_cross_terms = false;

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryCsvHeader) {
    throw std::runtime_error("unexpected trajectory CSV header in '" + path + "'");
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view view(line);
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = view.find(',', pos);
      if (comma == std::string_view::npos) {
        fields.push_back(view.substr(pos));
        break;
      }
      fields.push_back(view.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() != 13) {
      throw std::runtime_error("trajectory CSV row with " + std::to_string(fields.size()) +
                               " fields in '" + path + "'");
    }
    TrajectoryRow row;
    row.snap.t = parse_double(fields[0], "t");
    row.snap.E = parse_double(fields[1], "E");
    row.snap.I = parse_double(fields[2], "I");
    row.snap.J = parse_double(fields[3], "J");
    row.snap.kinetic = parse_double(fields[4], "kinetic");
    row.snap.boundary_kinetic = parse_double(fields[5], "boundary_kinetic");
    row.snap.grad_sq = parse_double(fields[6], "grad_sq");
    row.snap.lp_term = parse_double(fields[7], "lp_term");
    row.snap.trace_u = parse_double(fields[8], "trace_u");
    row.diss_interior = parse_double(fields[9], "diss_interior");
    row.diss_boundary = parse_double(fields[10], "diss_boundary");
    row.theta = parse_double(fields[11], "theta");
    row.snap.dt_used = parse_double(fields[12], "dt");
    row.snap.u_l2_sq = std::nan("");
    row.snap.trace_v = std::nan("");
    row.snap.uv_product = std::nan("");
    traj.rows.push_back(std::move(row));
  }
  return traj;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::string out = "lambda,I0,J0,verdict,xi_hat,t_star\n";
  for (const SweepRow& row : rows) {
    out += format_double(row.lambda);
    out += ',';
    out += format_double(row.I0);
    out += ',';
    out += format_double(row.J0);
    out += ',';
    out += to_string(row.outcome.kind);
    out += ',';
    out += (row.outcome.kind == RunOutcome::Kind::Decayed) ? format_double(row.outcome.xi_hat)
                                                           : "nan";
    out += ',';
    out += (row.outcome.kind == RunOutcome::Kind::BlownUp) ? format_double(row.outcome.t_star)
                                                           : "nan";
    out += '\n';
  }
  write_file(path, out);
}

void write_constants_csv(const std::vector<ConstantsRow>& rows, const std::string& path) {
  std::string out = "n,c_star,d,beta,d_direct,residual\n";
  for (const ConstantsRow& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.c_star);
    out += ',';
    out += format_double(row.d);
    out += ',';
    out += format_double(row.beta);
    out += ',';
    out += format_double(row.d_direct);
    out += ',';
    out += format_double(row.residual);
    out += '\n';
  }
  write_file(path, out);
}

void write_report_csv(const std::vector<std::pair<std::string, std::string>>& rows,
                      const std::string& path) {
  std::string out = "metric,value\n";
  for (const auto& [key, value] : rows) {
    out += key;
    out += ',';
    out += value;
    out += '\n';
  }
  write_file(path, out);
}

} // namespace pwell
