#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirac/config.hpp"
#include "dirac/localization.hpp"

#include <nlohmann/json_fwd.hpp>

namespace dirac {

// FNV-1a 64-bit content hash, hex-encoded.
std::string fnv1a64_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

std::string spectrum_csv(const std::vector<SpectrumEntry>& entries);
std::string zeros_csv(const std::vector<ZeroRecord>& zeros);
std::string toeplitz_csv(const ToeplitzSpectrum& spectrum);
// k-plane / z-plane point clouds for external plotting
std::string kplane_points_csv(const std::vector<ZeroRecord>& zeros);
std::string zplane_points_csv(const std::vector<ZeroRecord>& zeros);
// polyline tracing the boundary of a sector (for plot overlays)
std::string sector_boundary_csv(const SectorSpec& sector, double radius,
                                int samples = 256);

struct CheckResult {
  std::string name;
  bool pass;
};

// Run manifest: config snapshot, version, tolerances, truncation, timings
// and the hashed output inventory.
class RunManifest {
 public:
  RunManifest(std::string command, const RunConfig& cfg);
  void add_output(const std::string& path);
  void add_check(const std::string& name, bool pass);
  void add_timing(const std::string& name, double seconds);
  void set_note(const std::string& key, const std::string& value);
  bool all_pass() const;
  std::string to_json_string() const;
  void write(const std::string& path) const;

 private:
  std::string command_;
  nlohmann::json* body_;  // owned pimpl to keep json out of the header
  std::vector<CheckResult> checks_;

 public:
  ~RunManifest();
  RunManifest(const RunManifest&) = delete;
  RunManifest& operator=(const RunManifest&) = delete;
};

}  // namespace dirac
