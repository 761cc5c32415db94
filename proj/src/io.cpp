#include "towpde/io.hpp"

#include <charconv>

namespace towpde {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_schema_line(std::ostream& os, const std::string& name) {
  os << "# schema: towpde." << name << ".v1\n";
}

void write_grid_csv(std::ostream& os, const GridFunction& u) {
  write_schema_line(os, "grid");
  const Lattice& lat = u.lattice();
  os << "level,t";
  for (int a = 0; a < lat.n; ++a) os << ",x" << (a + 1);
  os << ",value\n";
  for (int k = 0; k < u.level_count(); ++k) {
    const auto& values = u.level(k);
    const std::string t = format_double(u.level_time(k));
    for (std::size_t i = 0; i < values.size(); ++i) {
      VecN x = lat.position(i);
      os << k << ',' << t;
      for (int a = 0; a < lat.n; ++a) os << ',' << format_double(x[a]);
      os << ',' << format_double(values[i]) << '\n';
    }
  }
}

void write_field_csv(std::ostream& os, const Lattice& lat, const std::vector<double>& values) {
  write_schema_line(os, "field");
  for (int a = 0; a < lat.n; ++a) os << (a ? ",x" : "x") << (a + 1);
  os << ",value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    VecN x = lat.position(i);
    for (int a = 0; a < lat.n; ++a) os << (a ? "," : "") << format_double(x[a]);
    os << ',' << format_double(values[i]) << '\n';
  }
}

void write_error_table_csv(std::ostream& os, const ErrorTable& table) {
  write_schema_line(os, "error_table");
  os << "eps,h,sup_error,runtime_seconds\n";
  for (const auto& row : table.rows) {
    os << format_double(row.eps) << ',' << format_double(row.h) << ','
       << format_double(row.sup_error) << ',' << format_double(row.runtime_seconds) << '\n';
  }
}

void write_asymptotics_csv(std::ostream& os, const AsymptoticResult& result) {
  write_schema_line(os, "asymptotics");
  os << "level,sup_diff\n";
  for (const auto& [k, diff] : result.checkpoints)
    os << k << ',' << format_double(diff) << '\n';
}

void write_estimates_csv(std::ostream& os, const std::vector<EstimateRecord>& records) {
  write_schema_line(os, "estimates");
  os << "x1,x2,x3,t,mean,stderr,samples\n";
  for (const auto& rec : records) {
    for (int a = 0; a < 3; ++a)
      os << (a < rec.z0.x.n ? format_double(rec.z0.x[a]) : "") << ',';
    os << format_double(rec.z0.t) << ',' << format_double(rec.estimate.mean) << ','
       << format_double(rec.estimate.stderr_) << ',' << rec.estimate.samples << '\n';
  }
}

void write_trajectories_csv(std::ostream& os, const std::vector<GameTrajectory>& trajectories) {
  write_schema_line(os, "trajectories");
  os << "trajectory,j,c,t,x1,x2,x3\n";
  for (std::size_t id = 0; id < trajectories.size(); ++id) {
    const auto& traj = trajectories[id];
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
      const auto& s = traj.states[j];
      os << id << ',' << j << ',' << s.c << ',' << format_double(s.Z.t);
      for (int a = 0; a < 3; ++a)
        os << ',' << (a < s.Z.x.n ? format_double(s.Z.x[a]) : "");
      os << '\n';
    }
  }
}

void write_exit_time_csv(std::ostream& os, const std::vector<ExitTimeRecord>& records) {
  write_schema_line(os, "exit_time");
  os << "alpha,eps,start_radius,mean_tau,stderr,samples,normalized\n";
  for (const auto& rec : records) {
    os << format_double(rec.alpha) << ',' << format_double(rec.eps) << ','
       << format_double(rec.start_radius) << ',' << format_double(rec.estimate.mean) << ','
       << format_double(rec.estimate.stderr_) << ',' << rec.estimate.samples << ','
       << format_double(rec.normalized) << '\n';
  }
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRecord>& records) {
  write_schema_line(os, "modulus_scan");
  os << "eps,lateral_C,initial_C,lateral_pairs,initial_pairs,lipschitz\n";
  for (const auto& rec : records) {
    os << format_double(rec.eps) << ',' << format_double(rec.scan.lateral_C) << ','
       << format_double(rec.scan.initial_C) << ',' << rec.scan.lateral_pairs << ','
       << rec.scan.initial_pairs << ',' << format_double(rec.scan.lipschitz_used) << '\n';
  }
}

}  // namespace towpde
