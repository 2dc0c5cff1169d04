#pragma once

#include "dipiir_app/config.hpp"
#include "dipiir_app/problem.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dipiir::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitCheck = 5;

/// Writes <run>.phantom/.full/.observed[/.pattern].dipt into `out`.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out,
                                                std::ostream& log);

/// Loads what cmd_simulate wrote for input.run from input.dir.
Simulation load_simulation(const RunConfig& cfg, const std::filesystem::path& out);

/// Runs the configured pipeline; writes <run>.recon.dipt, <run>.data.dipt
/// and <run>.trace.csv when produced, and <run>.report.json. Returns the report.
nlohmann::json cmd_reconstruct(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// rmse / psnr / ssim / nmse of a reconstruction against a reference. A
/// two-channel [2, n, n] reconstruction is scored by its magnitude.
nlohmann::json cmd_metrics(const std::filesystem::path& recon, const std::filesystem::path& reference,
                           const std::filesystem::path& report);

struct CheckLine {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

/// Adjoint, involution and slice-discipline checks for the configured problem.
std::vector<CheckLine> run_checks(const RunConfig& cfg);

/// Prints one line per check, writes <run>.check.json; returns kExitOk or kExitCheck.
int cmd_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// 8-bit binary PGM, min-max normalized.
void write_pgm(const std::filesystem::path& path, const Vec& image, Index rows, Index cols);

/// Full command line front end; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dipiir::app
