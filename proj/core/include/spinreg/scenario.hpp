#ifndef SPINREG_SCENARIO_HPP
#define SPINREG_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinreg/schedule.hpp"
#include "spinreg/spin_system.hpp"

namespace spinreg {

// A named, reproducible experiment run: everything is derived from the
// parameter set, the option map and the seed. Options not consumed by the
// scenario are rejected by name.
struct ScenarioConfig {
  std::string name;
  SpinSystemParams params = table1_params();
  std::map<std::string, double> options;
  uint64_t seed = 1;
  std::string out_dir = ".";
  int jobs = 1;

  double opt(const std::string& key, double fallback) const;
};

struct ScenarioResult {
  std::string name;
  std::vector<std::string> files;                  // written outputs
  std::map<std::string, double> scalars;           // summary values
  std::string manifest_path;
};

// Scenario names: calibrate, raman_spectroscopy, conditional_spectroscopy,
// rabi, long_rabi, coherence, sedor, readout_histograms, tomo, bell,
// sideband_pump. Unknown names throw.
ScenarioResult run_scenario(const ScenarioConfig& config);
std::vector<std::string> scenario_names();

// Simulation-backed calibration: analytic table refined by simulated
// spectroscopy (resonance positions), Rabi fits (pi times) and phase
// tomography of each gate (virtual-Z corrections).
CalibrationTable simulated_calibration(const SpinSystemParams& params,
                                       const CalibrationAnchors& anchors = {},
                                       int jobs = 1);

// Report row comparing a measured value against its reference window.
struct ReportRow {
  std::string name;
  double reference = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;   // pass when |measured - reference| <= tolerance
  bool pass = false;
  std::string detail;
};

struct Report {
  std::vector<ReportRow> rows;
  bool all_pass() const;
};

// Collect per-scenario summary JSON files from completed runs and render a
// comparison table; missing runs are listed by name. Returns process exit
// code semantics: 0 all pass, 2 any fail.
int emit_report(const std::vector<std::string>& summary_files, std::ostream& out);

// deterministic FNV-1a hash of the canonical config rendering (the manifest's
// config fingerprint)
uint64_t config_hash(const ScenarioConfig& config);

} // namespace spinreg

#endif
