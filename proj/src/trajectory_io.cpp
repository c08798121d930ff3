#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "contact/integrate.hpp"

namespace contact {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SpecError("trajectory line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

std::vector<std::string> expected_header(const SystemSpec& sys) {
  std::vector<std::string> cols{"t"};
  const auto& chart = *sys.chart();
  for (std::size_t k = 0; k < chart.phase_dim(); ++k) cols.push_back(chart.direction_name(k));
  cols.emplace_back("H");
  return cols;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const SystemSpec& sys, const Trajectory& traj) {
  const auto header = expected_header(sys);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out << format_double(traj.times[r]);
    for (double v : flatten(traj.states[r])) out << ',' << format_double(v);
    out << ',' << format_double(hamiltonian_value(sys, traj.states[r])) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, const SystemSpec& sys) {
  std::string line;
  if (!std::getline(in, line)) throw SpecError("trajectory file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = expected_header(sys);
  if (split(line) != header) throw SpecError("trajectory header does not match the system's coordinates");

  Trajectory traj;
  traj.method = "file";
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw SpecError("trajectory line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " columns");
    }
    std::vector<double> flat;
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) flat.push_back(parse_double(fields[i], line_no));
    const double t = parse_double(fields[0], line_no);
    if (!traj.times.empty() && !(t > traj.times.back())) {
      throw SpecError("trajectory line " + std::to_string(line_no) + ": times must increase");
    }
    traj.times.push_back(t);
    traj.states.push_back(state_from_flat(flat));
  }
  if (traj.times.empty()) throw SpecError("trajectory file has no samples");
  traj.accepted_steps = traj.size() - 1;
  return traj;
}

}  // namespace contact
