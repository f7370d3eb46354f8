#include "dirac/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace dirac {

namespace {

using nlohmann::json;

Complex parse_entry(const json& v) {
  if (v.is_array()) {
    DIRAC_REQUIRE(v.size() == 2, "config: complex entries are [re, im]");
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
  return Complex(v.get<double>(), 0.0);
}

TransverseKind parse_transverse_kind(const std::string& s) {
  if (s == "gaussian") return TransverseKind::Gaussian;
  if (s == "bump") return TransverseKind::Bump;
  throw Error("config: transverse.kind must be 'gaussian' or 'bump'");
}

AxialKind parse_axial_kind(const std::string& s) {
  if (s == "gaussian") return AxialKind::Gaussian;
  if (s == "polynomial") return AxialKind::Polynomial;
  throw Error("config: axial.kind must be 'gaussian' or 'polynomial'");
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  domain.validate(model.mass);
  validate_potential(potential);
  truncation.validate();
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "config: sign_m must be +-1");
  DIRAC_REQUIRE(search.tol > 0.0, "config: search.tol must be > 0");
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  cfg.model.mass = j.value("mass", 1.0);
  cfg.model.b0 = j.value("b0", 2.0);
  cfg.domain.eta = j.value("eta", 0.9);
  cfg.domain.gamma = j.value("gamma", 0.3);
  cfg.domain.eps_k = j.value("eps_k", 0.28);
  cfg.domain.delta = j.value("delta", 0.2);
  cfg.domain.nu_gap = j.value("nu_gap", 0.3);

  if (j.contains("potential")) {
    const json& p = j.at("potential");
    const double arg_phi = p.value("arg_phi", 0.5 * kPi);
    const double abs_phi = p.value("abs_phi", 1.0);
    cfg.potential.phi = std::polar(abs_phi, arg_phi);
    cfg.potential.epsilon = p.value("epsilon", 0.1);
    if (p.contains("transverse")) {
      cfg.potential.transverse.kind =
          parse_transverse_kind(p.at("transverse").value("kind", "gaussian"));
      cfg.potential.transverse.c = p.at("transverse").value("c", 1.0);
    }
    if (p.contains("axial")) {
      cfg.potential.axial.kind =
          parse_axial_kind(p.at("axial").value("kind", "gaussian"));
      cfg.potential.axial.beta = p.at("axial").value("beta", 4.0);
    }
    if (p.contains("spinor")) {
      const json& rows = p.at("spinor");
      DIRAC_REQUIRE(rows.is_array() && rows.size() == 4,
                    "config: potential.spinor needs 4 rows");
      for (int r = 0; r < 4; ++r) {
        DIRAC_REQUIRE(rows[r].is_array() && rows[r].size() == 4,
                      "config: potential.spinor rows need 4 entries");
        for (int c = 0; c < 4; ++c)
          cfg.potential.spinor_factor(r, c) = parse_entry(rows[r][c]);
      }
    }
  }

  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    cfg.truncation.n_levels = t.value("n_levels", 1);
    cfg.truncation.m_cut = t.value("m_cut", 4);
    cfg.truncation.grid.n = t.value("axial_n", 96);
    cfg.truncation.grid.halfwidth = t.value("axial_l", 10.0);
    cfg.truncation.dim_cap = t.value("dim_cap", 20000);
  }
  if (j.contains("search")) {
    const json& s = j.at("search");
    cfg.search.tol = s.value("tol", 1e-7);
    cfg.search.w_max = s.value("w_max", 4);
    cfg.search.axis_standoff_frac = s.value("standoff", 0.02);
    cfg.sign_m = s.value("sign_m", 1);
  }
  if (j.contains("sector")) {
    cfg.sector_eps_hi = j.at("sector").value("eps_hi", 0.5);
    cfg.sector_bisection_steps = j.at("sector").value("bisection_steps", 3);
  }
  if (j.contains("cluster")) cfg.cluster_ell_max = j.at("cluster").value("ell_max", 2);
  if (j.contains("bounds")) {
    cfg.bounds_q = j.at("bounds").value("q", 4.0);
    cfg.bounds_tau = j.at("bounds").value("tau", 1.0);
    if (j.at("bounds").contains("im_grid"))
      cfg.bounds_im_grid = j.at("bounds").at("im_grid").get<std::vector<double>>();
  }
  if (j.contains("annulus_r"))
    cfg.annulus_r = j.at("annulus_r").get<std::vector<double>>();
  cfg.seed = j.value("seed", 0UL);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  DIRAC_REQUIRE(in.good(), "config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json config_snapshot(const RunConfig& cfg) {
  json j;
  j["mass"] = cfg.model.mass;
  j["b0"] = cfg.model.b0;
  j["eta"] = cfg.domain.eta;
  j["gamma"] = cfg.domain.gamma;
  j["eps_k"] = cfg.domain.eps_k;
  j["delta"] = cfg.domain.delta;
  j["nu_gap"] = cfg.domain.nu_gap;
  j["potential"]["arg_phi"] = cfg.potential.arg_phi();
  j["potential"]["abs_phi"] = cfg.potential.abs_phi();
  j["potential"]["epsilon"] = cfg.potential.epsilon;
  j["potential"]["transverse"]["kind"] =
      cfg.potential.transverse.kind == TransverseKind::Gaussian ? "gaussian" : "bump";
  j["potential"]["transverse"]["c"] = cfg.potential.transverse.c;
  j["potential"]["axial"]["kind"] =
      cfg.potential.axial.kind == AxialKind::Gaussian ? "gaussian" : "polynomial";
  j["potential"]["axial"]["beta"] = cfg.potential.axial.beta;
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) {
      const Complex v = cfg.potential.spinor_factor(r, c);
      if (v.imag() == 0.0)
        row.push_back(v.real());
      else
        row.push_back(json::array({v.real(), v.imag()}));
    }
    j["potential"]["spinor"].push_back(row);
  }
  j["truncation"]["n_levels"] = cfg.truncation.n_levels;
  j["truncation"]["m_cut"] = cfg.truncation.m_cut;
  j["truncation"]["axial_n"] = cfg.truncation.grid.n;
  j["truncation"]["axial_l"] = cfg.truncation.grid.halfwidth;
  j["search"]["tol"] = cfg.search.tol;
  j["search"]["w_max"] = cfg.search.w_max;
  j["search"]["standoff"] = cfg.search.axis_standoff_frac;
  j["search"]["sign_m"] = cfg.sign_m;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace dirac
