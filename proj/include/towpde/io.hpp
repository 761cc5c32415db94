#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "towpde/analysis.hpp"
#include "towpde/dpp.hpp"
#include "towpde/game.hpp"
#include "towpde/grid.hpp"

namespace towpde {

inline constexpr const char* kLibraryVersion = "1.0.0";

// Shortest round-trip decimal representation; keeps CSV artifacts
// byte-identical across platforms.
std::string format_double(double v);

// Every artifact starts with a schema-version line.
void write_schema_line(std::ostream& os, const std::string& name);

void write_grid_csv(std::ostream& os, const GridFunction& u);
void write_field_csv(std::ostream& os, const Lattice& lat, const std::vector<double>& values);
void write_error_table_csv(std::ostream& os, const ErrorTable& table);
void write_asymptotics_csv(std::ostream& os, const AsymptoticResult& result);

struct EstimateRecord {
  SpaceTimePoint z0;
  ValueEstimate estimate;
};
void write_estimates_csv(std::ostream& os, const std::vector<EstimateRecord>& records);

void write_trajectories_csv(std::ostream& os, const std::vector<GameTrajectory>& trajectories);

struct ExitTimeRecord {
  double alpha = 0.0, eps = 0.0, start_radius = 0.0;
  ValueEstimate estimate;
  double normalized = 0.0;  // eps^2 * mean / (dist + eps)
};
void write_exit_time_csv(std::ostream& os, const std::vector<ExitTimeRecord>& records);

struct ScanRecord {
  double eps = 0.0;
  ModulusScanResult scan;
};
void write_scan_csv(std::ostream& os, const std::vector<ScanRecord>& records);

}  // namespace towpde
