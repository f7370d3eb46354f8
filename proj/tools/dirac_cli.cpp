// Command-line front end: configuration loading, run orchestration, result
// persistence and plot-data emission. Exit codes: 0 pass, 1 config error,
// 2 numerical inconclusiveness, 3 assertion failure.

#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dirac/config.hpp"
#include "dirac/io.hpp"
#include "dirac/linalg.hpp"

namespace fs = std::filesystem;
using namespace dirac;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitAssertion = 3;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out) {
  Timer timer;
  RunManifest manifest("spectrum", cfg);
  BSAssembler bs(cfg.model, cfg.truncation, cfg.potential);
  const double mt = cfg.sign_m * cfg.model.mass;
  auto entries =
      direct_spectrum(bs.full_matrix(), Complex(mt, 0.0), cfg.domain.eta);
  const std::string csv_path = out_path(out, "spectrum.csv");
  write_text_file(csv_path, spectrum_csv(entries));
  manifest.add_output(csv_path);

  // numerical-range guard on everything reported
  const double guard = cfg.potential.epsilon * cfg.potential.abs_phi() *
                           cfg.potential.max_w() +
                       1e-8;
  bool range_ok = true;
  for (const auto& e : entries) range_ok &= std::abs(e.z.imag()) <= guard;
  manifest.add_check("numerical_range_inclusion", range_ok);
  manifest.add_timing("total_s", timer.seconds());
  manifest.write(out_path(out, "manifest.json"));
  std::cout << "spectrum: " << entries.size() << " clusters near "
            << (cfg.sign_m > 0 ? "+m" : "-m") << "\n";
  return manifest.all_pass() ? kExitPass : kExitAssertion;
}

int cmd_zeros(const RunConfig& cfg, const std::string& out) {
  Timer timer;
  RunManifest manifest("zeros", cfg);
  BSAssembler bs(cfg.model, cfg.truncation, cfg.potential);
  const double r_in =
      std::max(1e-3, cfg.search.axis_standoff_frac) * cfg.domain.eps_k;
  std::vector<ZeroRecord> zeros;
  std::vector<SearchRegion> unresolved;
  for (int hp : {+1, -1}) {
    SearchRegion reg =
        hp > 0 ? SearchRegion{Complex(0.0, r_in),
                              Complex(cfg.domain.eps_k, cfg.domain.eps_k)}
               : SearchRegion{Complex(0.0, -cfg.domain.eps_k),
                              Complex(cfg.domain.eps_k, -r_in)};
    FindZerosResult res = find_zeros(bs, cfg.sign_m, reg,
                                     BSBackend::MatrixSolve, cfg.search);
    zeros.insert(zeros.end(), res.zeros.begin(), res.zeros.end());
    unresolved.insert(unresolved.end(), res.unresolved.begin(),
                      res.unresolved.end());
  }
  const std::string zcsv = out_path(out, "zeros.csv");
  write_text_file(zcsv, zeros_csv(zeros));
  manifest.add_output(zcsv);
  const std::string kcsv = out_path(out, "kplane_points.csv");
  write_text_file(kcsv, kplane_points_csv(zeros));
  manifest.add_output(kcsv);
  const std::string pcsv = out_path(out, "zplane_points.csv");
  write_text_file(pcsv, zplane_points_csv(zeros));
  manifest.add_output(pcsv);
  manifest.add_check("no_unresolved_regions", unresolved.empty());
  manifest.add_timing("total_s", timer.seconds());
  manifest.write(out_path(out, "manifest.json"));
  std::cout << "zeros: " << zeros.size() << " records, " << unresolved.size()
            << " unresolved regions\n";
  if (!unresolved.empty()) {
    for (const auto& r : unresolved)
      std::cout << "  unresolved box [" << r.lo << ", " << r.hi << "]\n";
    return kExitInconclusive;
  }
  return kExitPass;
}

int cmd_toeplitz(const RunConfig& cfg, const std::string& out) {
  Timer timer;
  RunManifest manifest("toeplitz", cfg);
  LLLBasis lll(cfg.model.b0, cfg.truncation.m_cut);
  Matrix t = toeplitz_matrix_radial(
      vm_profile(cfg.potential, cfg.sign_m, ProfileWeighting::W), lll);
  RealVector mu = linalg::eigenvalues_hermitian(t);
  std::vector<double> mu_desc(mu.data(), mu.data() + mu.size());
  std::sort(mu_desc.rbegin(), mu_desc.rend());
  ToeplitzSpectrum spectrum =
      gap_radii(mu_desc, cfg.domain.nu_gap, cfg.truncation.m_cut);
  const std::string csv = out_path(out, "toeplitz.csv");
  write_text_file(csv, toeplitz_csv(spectrum));
  manifest.add_output(csv);
  if (!spectrum.warning.empty()) manifest.set_note("warning", spectrum.warning);
  // the distance invariant on every stored radius
  bool ok = true;
  for (double r : spectrum.radii) {
    double dist = 1e300;
    for (double m : spectrum.mu) dist = std::min(dist, std::abs(r - m));
    ok &= dist >= 0.5 * cfg.domain.nu_gap * r;
  }
  manifest.add_check("gap_distance_invariant", ok);
  manifest.add_timing("total_s", timer.seconds());
  manifest.write(out_path(out, "manifest.json"));
  std::cout << "toeplitz: " << spectrum.mu.size() << " eigenvalues, "
            << spectrum.radii.size() << " gap radii\n";
  return manifest.all_pass() ? kExitPass : kExitAssertion;
}

int cmd_sector_check(const RunConfig& cfg, const std::string& out) {
  Timer timer;
  RunManifest manifest("sector-check", cfg);
  SectorCheckReport rep = sector_absence_check(
      cfg.model, cfg.truncation, cfg.potential, cfg.domain, cfg.sign_m,
      cfg.sector_eps_hi, cfg.sector_bisection_steps, cfg.search);
  json j;
  j["pass"] = rep.pass;
  j["zero_count"] = rep.zero_count;
  j["eps_used"] = rep.eps_used;
  j["eps0_empirical"] = rep.eps0_empirical;
  j["sign_m"] = rep.sign_m;
  j["unresolved_regions"] = rep.unresolved.size();
  const std::string jpath = out_path(out, "sector_report.json");
  write_text_file(jpath, j.dump(2) + "\n");
  manifest.add_output(jpath);
  const std::string bpath = out_path(out, "sector_boundary.csv");
  write_text_file(bpath, sector_boundary_csv(rep.sector, cfg.domain.eps_k));
  manifest.add_output(bpath);
  if (!rep.offenders.empty()) {
    const std::string opath = out_path(out, "sector_offenders.csv");
    write_text_file(opath, zeros_csv(rep.offenders));
    manifest.add_output(opath);
  }
  manifest.add_check("sector_empty", rep.zero_count == 0);
  manifest.add_timing("total_s", timer.seconds());
  manifest.write(out_path(out, "manifest.json"));
  std::cout << "sector-check: " << (rep.pass ? "PASS" : "FAIL") << " at eps "
            << rep.eps_used << " (empirical eps0 " << rep.eps0_empirical
            << ")\n";
  if (!rep.unresolved.empty()) return kExitInconclusive;
  return rep.pass ? kExitPass : kExitAssertion;
}

int cmd_cluster_check(const RunConfig& cfg, const std::string& out) {
  Timer timer;
  RunManifest manifest("cluster-check", cfg);
  BSAssembler bs(cfg.model, cfg.truncation, cfg.potential);
  ClusterCheckReport rep = cluster_lower_bound_check(
      bs, cfg.sign_m, cfg.domain, cfg.cluster_ell_max, cfg.search);
  json j;
  j["axis_angle"] = rep.axis_angle;
  j["median_angle"] = rep.median_angle;
  j["angle_ok"] = rep.angle_ok;
  j["sign_m"] = rep.sign_m;
  j["bands"] = json::array();
  bool all_satisfied = true, inconclusive = false;
  std::vector<ZeroRecord> cloud;
  for (const auto& row : rep.rows) {
    json b;
    b["ell"] = row.ell;
    b["r_hi"] = row.r_hi;
    b["r_lo"] = row.r_lo;
    b["trace_band"] = row.trace_band;
    b["zero_count"] = row.zero_count;
    b["inconclusive"] = row.inconclusive;
    b["satisfied"] = row.satisfied;
    j["bands"].push_back(b);
    all_satisfied &= row.satisfied;
    inconclusive |= row.inconclusive;
    cloud.insert(cloud.end(), row.zeros.begin(), row.zeros.end());
  }
  const std::string jpath = out_path(out, "cluster_report.json");
  write_text_file(jpath, j.dump(2) + "\n");
  manifest.add_output(jpath);
  const std::string kcsv = out_path(out, "cluster_kplane.csv");
  write_text_file(kcsv, kplane_points_csv(cloud));
  manifest.add_output(kcsv);
  const std::string zcsv = out_path(out, "cluster_zplane.csv");
  write_text_file(zcsv, zplane_points_csv(cloud));
  manifest.add_output(zcsv);
  manifest.add_check("band_lower_bounds", all_satisfied);
  manifest.add_check("accumulation_axis", rep.angle_ok);
  manifest.add_timing("total_s", timer.seconds());
  manifest.write(out_path(out, "manifest.json"));
  std::cout << "cluster-check: " << (all_satisfied ? "PASS" : "FAIL") << " over "
            << rep.rows.size() << " bands\n";
  if (inconclusive) return kExitInconclusive;
  return (all_satisfied && rep.angle_ok) ? kExitPass : kExitAssertion;
}

int cmd_bounds(const RunConfig& cfg, const std::string& out) {
  Timer timer;
  RunManifest manifest("bounds", cfg);
  BSAssembler bs(cfg.model, cfg.truncation, cfg.potential);
  json j;
  j["q"] = cfg.bounds_q;
  j["tau"] = cfg.bounds_tau;
  j["rows"] = json::array();
  bool finite = true;
  for (double im : cfg.bounds_im_grid) {
    const Complex z(cfg.sign_m * cfg.model.mass, im);
    SchattenReport rep = schatten_diagnostics(bs, z, cfg.bounds_q, cfg.bounds_tau);
    json row;
    row["z_re"] = z.real();
    row["z_im"] = z.imag();
    row["lhs_p"] = rep.lhs_p;
    row["m_value"] = rep.m_value;
    row["ratio_p"] = rep.ratio_p();
    row["lhs_q"] = rep.lhs_q;
    row["m_tilde"] = rep.m_tilde;
    row["ratio_q"] = rep.ratio_q();
    j["rows"].push_back(row);
    finite &= std::isfinite(rep.ratio_p()) && std::isfinite(rep.ratio_q());
  }
  const std::string jpath = out_path(out, "bounds_report.json");
  write_text_file(jpath, j.dump(2) + "\n");
  manifest.add_output(jpath);
  manifest.add_check("finite_fitted_constants", finite);
  manifest.add_timing("total_s", timer.seconds());
  manifest.write(out_path(out, "manifest.json"));
  std::cout << "bounds: " << cfg.bounds_im_grid.size() << " grid points\n";
  return finite ? kExitPass : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-real eigenvalue localization toolkit for the perturbed "
               "magnetic Dirac operator"};
  std::string config_path, out_dir = ".";
  int threads = 1;
  double tol = -1.0;
  unsigned long seed = 0;
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--tol", tol, "override search tolerance");
  app.add_option("--seed", seed, "seed recorded in the manifest (randomized presets only)");
  app.require_subcommand(1);
  auto* sub_spectrum = app.add_subcommand("spectrum", "dense eigensolve near the threshold");
  auto* sub_zeros = app.add_subcommand("zeros", "determinant-zero search in the k-plane");
  auto* sub_toeplitz = app.add_subcommand("toeplitz", "projected-profile spectrum and gap radii");
  auto* sub_sector = app.add_subcommand("sector-check", "absence-of-eigenvalues sector scan");
  auto* sub_cluster = app.add_subcommand("cluster-check", "per-band cluster lower bounds");
  auto* sub_bounds = app.add_subcommand("bounds", "weighted-resolvent norm diagnostics");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (tol > 0.0) cfg.search.tol = tol;
    cfg.threads = threads;
    cfg.seed = seed ? seed : cfg.seed;
    fs::create_directories(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (sub_spectrum->parsed()) return cmd_spectrum(cfg, out_dir);
    if (sub_zeros->parsed()) return cmd_zeros(cfg, out_dir);
    if (sub_toeplitz->parsed()) return cmd_toeplitz(cfg, out_dir);
    if (sub_sector->parsed()) return cmd_sector_check(cfg, out_dir);
    if (sub_cluster->parsed()) return cmd_cluster_check(cfg, out_dir);
    if (sub_bounds->parsed()) return cmd_bounds(cfg, out_dir);
  } catch (const ContourUnsafe& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitConfig;
}
