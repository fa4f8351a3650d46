#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "axonctl/params.hpp"

namespace axonctl {

struct Config {
  BioParams bio;
  ControlParams control;
  ScenarioConfig scenario;
  OutputConfig output;
};

/// Parses the sectioned key-value config format ([bio]/[control]/[scenario]/
/// [output], '#' comments). Omitted keys keep their documented defaults.
/// Throws ConfigError on parse failure or any invariant violation.
Config load_config(const std::string& path);

/// Inverse of load_config on all parameter fields.
void write_config(const Config& cfg, const std::string& path);

/// Writes the run time series as CSV with the documented fixed header,
/// full double precision (round-trips bit-exactly through read_timeseries).
void write_timeseries(std::span<const RunRecord> records,
                      const std::string& path);

std::vector<RunRecord> read_timeseries(const std::string& path);

/// Appends profile snapshots (columns t, sigma, x, c, u, w) to one CSV.
class SnapshotWriter {
 public:
  explicit SnapshotWriter(const std::string& path);
  ~SnapshotWriter();
  SnapshotWriter(const SnapshotWriter&) = delete;
  SnapshotWriter& operator=(const SnapshotWriter&) = delete;

  void append(double t, double l, std::span<const double> sigma,
              std::span<const double> c, std::span<const double> u,
              std::span<const double> w);

 private:
  struct Impl;
  Impl* impl_;
};

/// Emits a gnuplot script that renders the time series and the latest
/// profile snapshot from the given CSV files.
void write_plot_script(const std::string& path,
                       const std::string& timeseries_csv,
                       const std::string& snapshot_csv);

}  // namespace axonctl
