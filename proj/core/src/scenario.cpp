#include "spinreg/scenario.hpp"

#include <stdexcept>

namespace spinreg {

double ScenarioConfig::opt(const std::string& key, double fallback) const {
  auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

std::vector<std::string> scenario_names() {
  return {"calibrate",     "raman_spectroscopy", "conditional_spectroscopy",
          "rabi",          "long_rabi",          "coherence",
          "sedor",         "readout_histograms", "tomo",
          "bell",          "sideband_pump"};
}

bool Report::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

ScenarioResult run_scenario(const ScenarioConfig&) {
  throw std::runtime_error("not yet implemented");
}

CalibrationTable simulated_calibration(const SpinSystemParams& params,
                                       const CalibrationAnchors& anchors, int) {
  return analytic_calibration(params, anchors);
}

int emit_report(const std::vector<std::string>&, std::ostream&) { return 1; }

uint64_t config_hash(const ScenarioConfig&) { return 0; }

} // namespace spinreg
