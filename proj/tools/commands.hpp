#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace uam::cli {

enum ExitCode { kOk = 0, kIo = 1, kConfig = 2, kInfeasible = 3, kCalibration = 4 };

struct RunOptions {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;  // more than one: a sub-directory per seed
  std::optional<std::int64_t> horizon;
  unsigned jobs = 1;
};

struct CalibrateOptions {
  std::string which;  // energy, aging, econ
  std::string input;
  std::string specs_dir;  // default: <input dir>/../specs
  std::string aging;      // econ only: aging params file
  std::string out;        // default: stdout only
};

struct ScanOptions {
  std::string cities;
  std::string market;
  std::vector<double> prices{2.0, 6.0};
  std::vector<double> densities{1.0, 4.0};
  std::string out = "out";
};

int cmd_validate(const std::string& path, bool print_resolved);
int cmd_run(const RunOptions& o);
int cmd_calibrate(const CalibrateOptions& o);
int cmd_scan(const ScanOptions& o);

}  // namespace uam::cli
