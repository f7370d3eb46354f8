#include "dirac/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dirac {

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  DIRAC_REQUIRE(in.good(), "fnv1a64: cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  DIRAC_REQUIRE(out.good(), "write: cannot open " + path);
  out << content;
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}
}  // namespace

std::string spectrum_csv(const std::vector<SpectrumEntry>& entries) {
  std::ostringstream os;
  os << "re,im,multiplicity\n";
  for (const auto& e : entries)
    os << fmt(e.z.real()) << ',' << fmt(e.z.imag()) << ',' << e.multiplicity
       << '\n';
  return os.str();
}

std::string zeros_csv(const std::vector<ZeroRecord>& zeros) {
  std::ostringstream os;
  os << "k_re,k_im,z_re,z_im,mult,residual\n";
  for (const auto& z : zeros)
    os << fmt(z.point.k.real()) << ',' << fmt(z.point.k.imag()) << ','
       << fmt(z.point.z.real()) << ',' << fmt(z.point.z.imag()) << ','
       << z.multiplicity << ',' << fmt(z.residual) << '\n';
  return os.str();
}

std::string toeplitz_csv(const ToeplitzSpectrum& spectrum) {
  std::ostringstream os;
  os << "index,mu,r_ell\n";
  for (size_t i = 0; i < spectrum.mu.size(); ++i) {
    os << i << ',' << fmt(spectrum.mu[i]) << ',';
    if (i < spectrum.radii.size()) os << fmt(spectrum.radii[i]);
    os << '\n';
  }
  return os.str();
}

std::string kplane_points_csv(const std::vector<ZeroRecord>& zeros) {
  std::ostringstream os;
  os << "k_re,k_im,mult\n";
  for (const auto& z : zeros)
    os << fmt(z.point.k.real()) << ',' << fmt(z.point.k.imag()) << ','
       << z.multiplicity << '\n';
  return os.str();
}

std::string zplane_points_csv(const std::vector<ZeroRecord>& zeros) {
  std::ostringstream os;
  os << "z_re,z_im,mult\n";
  for (const auto& z : zeros)
    os << fmt(z.point.z.real()) << ',' << fmt(z.point.z.imag()) << ','
       << z.multiplicity << '\n';
  return os.str();
}

std::string sector_boundary_csv(const SectorSpec& sector, double radius,
                                int samples) {
  // trace membership transitions on circles of growing radius
  std::ostringstream os;
  os << "k_re,k_im\n";
  for (int ir = 1; ir <= 24; ++ir) {
    const double r = radius * ir / 24.0;
    bool prev = sector.contains(std::polar(r, 0.0) + Complex(0, 1e-12));
    for (int a = 1; a <= samples; ++a) {
      const double th = 2.0 * kPi * a / samples;
      const Complex k = std::polar(r, th);
      const bool cur = sector.contains(k);
      if (cur != prev) os << fmt(k.real()) << ',' << fmt(k.imag()) << '\n';
      prev = cur;
    }
  }
  return os.str();
}

RunManifest::RunManifest(std::string command, const RunConfig& cfg)
    : command_(std::move(command)), body_(new nlohmann::json()) {
  (*body_)["command"] = command_;
  (*body_)["version"] = "diracspec 1.0.0";
  (*body_)["config"] = config_snapshot(cfg);
  (*body_)["outputs"] = nlohmann::json::array();
  (*body_)["checks"] = nlohmann::json::array();
  (*body_)["timings"] = nlohmann::json::object();
}

RunManifest::~RunManifest() { delete body_; }

void RunManifest::add_output(const std::string& path) {
  nlohmann::json entry;
  entry["file"] = path;
  entry["fnv1a64"] = fnv1a64_file(path);
  (*body_)["outputs"].push_back(entry);
}

void RunManifest::add_check(const std::string& name, bool pass) {
  checks_.push_back({name, pass});
  nlohmann::json entry;
  entry["name"] = name;
  entry["pass"] = pass;
  (*body_)["checks"].push_back(entry);
}

void RunManifest::add_timing(const std::string& name, double seconds) {
  (*body_)["timings"][name] = seconds;
}

void RunManifest::set_note(const std::string& key, const std::string& value) {
  (*body_)["notes"][key] = value;
}

bool RunManifest::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

std::string RunManifest::to_json_string() const { return body_->dump(2) + "\n"; }

void RunManifest::write(const std::string& path) const {
  write_text_file(path, to_json_string());
}

}  // namespace dirac
