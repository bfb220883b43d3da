// nh-magic: command-line front end for the nhmagic library.
//
// Subcommands:
//   scan           parameter-grid scan (CSV/JSON, checkpointed, parallel)
//   magic-exact    exact M2 of one ground state (optionally a subregion)
//   magic-sample   Monte Carlo M2 estimate with error bars
//   kspace-scan    momentum-space magic density over a (g, delta) grid
//   kspace-resolve per-momentum sector magic at fixed (g, delta)
//   spectrum       PT classifier: complex_fraction over a parameter range
//
// The scan subcommand accepts a flat key=value config file (# comments);
// command-line flags override config values.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhmagic/eigensolver.hpp"
#include "nhmagic/kspace.hpp"
#include "nhmagic/magic.hpp"
#include "nhmagic/model.hpp"
#include "nhmagic/pauli.hpp"
#include "nhmagic/rdm.hpp"
#include "nhmagic/sampler.hpp"
#include "nhmagic/sweep.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// "name:min:max:points" -> Axis
nhmagic::Axis parse_axis(const std::string& s) {
  const auto f = split(s, ':');
  if (f.size() != 4) throw CLI::ValidationError("axis", "expected name:min:max:points, got '" + s + "'");
  nhmagic::Axis ax;
  ax.name = trim(f[0]);
  ax.min = std::stod(f[1]);
  ax.max = std::stod(f[2]);
  ax.points = std::stoi(f[3]);
  return ax;
}

// "min:max:points" -> Axis with a fixed name
nhmagic::Axis parse_range(const std::string& name, const std::string& s) {
  const auto f = split(s, ':');
  if (f.size() != 3)
    throw CLI::ValidationError("range", "expected min:max:points, got '" + s + "'");
  nhmagic::Axis ax;
  ax.name = name;
  ax.min = std::stod(f[0]);
  ax.max = std::stod(f[1]);
  ax.points = std::stoi(f[2]);
  return ax;
}

// "a..b" (inclusive) -> pair
std::pair<int, int> parse_region(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos)
    throw CLI::ValidationError("region", "expected a..b, got '" + s + "'");
  return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

// Flat key=value config file; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", "expected key=value, got '" + line + "'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

nhmagic::Model parse_model(const std::string& s) {
  if (s == "nhti") return nhmagic::Model::nhti;
  if (s == "xx_real") return nhmagic::Model::xx_real;
  if (s == "xx_kspace") return nhmagic::Model::xx_kspace;
  throw CLI::ValidationError("--model", "expected nhti|xx_real|xx_kspace, got '" + s + "'");
}

std::string f17(double x) { return nhmagic::detail::fmt17(x); }

// Ground state of a real-space model chosen by name.
nhmagic::GroundState solve_ground(const std::string& model, int L, double J, double h,
                                  double gamma, double g, double delta,
                                  const nhmagic::SolverOptions& opts) {
  if (model == "nhti")
    return nhmagic::ground_state(nhmagic::build_nhti(nhmagic::IsingParams{J, h, gamma, L}), opts);
  if (model == "xx_real")
    return nhmagic::ground_state(nhmagic::build_xx_spin(nhmagic::XXParams{J, delta, g, L}), opts);
  throw CLI::ValidationError("--model", "expected nhti|xx_real, got '" + model + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nh-magic: stabilizer 2-Renyi entropy of non-Hermitian spin-chain ground states"};
  app.require_subcommand(1);

  // ---------------------------------------------------------------- scan --
  auto* scan = app.add_subcommand("scan", "parameter-grid scan of ground-state magic");
  std::string sc_config, sc_model = "nhti", sc_axis1, sc_axis2, sc_out = "scan.csv",
              sc_format = "csv", sc_method = "exact";
  std::vector<int> sc_L;
  std::vector<std::string> sc_set;
  int sc_jobs = 0, sc_chains = 4, sc_thin = 0, sc_kry = 30, sc_maxit = 400, sc_cap = 14;
  std::int64_t sc_steps = 10000, sc_burn = -1, sc_dense = 4096;
  std::uint64_t sc_seed = 0x6d616769;
  double sc_tol = 1e-8, sc_pairp = 0.25;
  auto* o_cfg = scan->add_option("--config", sc_config, "flat key=value config file");
  auto* o_model = scan->add_option("--model", sc_model, "nhti|xx_real|xx_kspace");
  auto* o_ax1 = scan->add_option("--axis1", sc_axis1, "first (fastest) axis name:min:max:points");
  auto* o_ax2 = scan->add_option("--axis2", sc_axis2, "second (outer) axis name:min:max:points");
  auto* o_L = scan->add_option("--L", sc_L, "system sizes (momentum mesh for xx_kspace)");
  auto* o_method = scan->add_option("--method", sc_method, "exact|sample");
  auto* o_out = scan->add_option("--out", sc_out, "output path");
  auto* o_format = scan->add_option("--format", sc_format, "csv|json");
  auto* o_jobs = scan->add_option("--jobs", sc_jobs, "worker threads (0: NH_MAGIC_JOBS, then hardware)");
  auto* o_seed = scan->add_option("--seed", sc_seed, "sampler master seed");
  auto* o_set = scan->add_option("--set", sc_set, "fixed parameter key=value (repeatable)");
  auto* o_chains = scan->add_option("--chains", sc_chains, "sampler chains");
  auto* o_steps = scan->add_option("--steps", sc_steps, "sampler steps per chain");
  auto* o_burn = scan->add_option("--burn", sc_burn, "sampler burn-in (default steps/10)");
  auto* o_thin = scan->add_option("--thin", sc_thin, "sampler thinning stride (default 2L)");
  auto* o_pairp = scan->add_option("--pair-prob", sc_pairp, "adjacent-pair proposal probability");
  auto* o_dense = scan->add_option("--dense-threshold", sc_dense, "dense eigensolver cutoff");
  auto* o_kry = scan->add_option("--krylov-dim", sc_kry, "Arnoldi basis size");
  auto* o_maxit = scan->add_option("--max-iter", sc_maxit, "Arnoldi restarts");
  auto* o_tol = scan->add_option("--tol", sc_tol, "eigensolver residual tolerance");
  auto* o_cap = scan->add_option("--magic-cap", sc_cap, "max L for exact enumeration");

  // ---------------------------------------------------------- magic-exact --
  auto* mex = app.add_subcommand("magic-exact", "exact M2 of one ground state");
  mex->set_help_flag("--help", "print help");  // frees -h for the field strength
  std::string mx_model = "nhti", mx_region;
  int mx_L = 8, mx_cap = 14;
  double mx_J = 1, mx_h = 1, mx_gamma = 0, mx_g = 0, mx_delta = 0, mx_tol = 1e-8;
  std::int64_t mx_dense = 4096;
  int mx_kry = 30, mx_maxit = 400;
  mex->add_option("--model", mx_model, "nhti|xx_real");
  mex->add_option("--L", mx_L, "chain length")->required();
  mex->add_option("--J", mx_J, "coupling");
  mex->add_option("--h", mx_h, "transverse field (nhti)");
  mex->add_option("--gamma", mx_gamma, "imaginary-field strength (nhti)");
  mex->add_option("--g", mx_g, "staggered imaginary field (xx_real)");
  mex->add_option("--delta", mx_delta, "staggered hopping imbalance (xx_real)");
  mex->add_option("--region", mx_region, "site range a..b (default: full chain)");
  mex->add_option("--magic-cap", mx_cap, "max region length for exact enumeration");
  mex->add_option("--dense-threshold", mx_dense, "dense eigensolver cutoff");
  mex->add_option("--krylov-dim", mx_kry, "Arnoldi basis size");
  mex->add_option("--max-iter", mx_maxit, "Arnoldi restarts");
  mex->add_option("--tol", mx_tol, "eigensolver residual tolerance");

  // --------------------------------------------------------- magic-sample --
  auto* msa = app.add_subcommand("magic-sample", "Monte Carlo M2 estimate");
  msa->set_help_flag("--help", "print help");
  std::string ms_model = "nhti", ms_region;
  int ms_L = 8, ms_chains = 4, ms_thin = 0;
  std::int64_t ms_steps = 10000, ms_burn = -1, ms_dense = 4096;
  int ms_kry = 30, ms_maxit = 400;
  std::uint64_t ms_seed = 0x6d616769;
  double ms_J = 1, ms_h = 1, ms_gamma = 0, ms_g = 0, ms_delta = 0, ms_tol = 1e-8, ms_pairp = 0.25;
  msa->add_option("--model", ms_model, "nhti|xx_real");
  msa->add_option("--L", ms_L, "chain length")->required();
  msa->add_option("--J", ms_J, "coupling");
  msa->add_option("--h", ms_h, "transverse field (nhti)");
  msa->add_option("--gamma", ms_gamma, "imaginary-field strength (nhti)");
  msa->add_option("--g", ms_g, "staggered imaginary field (xx_real)");
  msa->add_option("--delta", ms_delta, "staggered hopping imbalance (xx_real)");
  msa->add_option("--region", ms_region, "site range a..b (default: full chain)");
  msa->add_option("--chains", ms_chains, "independent chains (>= 2)");
  msa->add_option("--steps", ms_steps, "steps per chain");
  msa->add_option("--burn", ms_burn, "burn-in (default steps/10)");
  msa->add_option("--thin", ms_thin, "thinning stride (default 2L)");
  msa->add_option("--seed", ms_seed, "master seed");
  msa->add_option("--pair-prob", ms_pairp, "adjacent-pair proposal probability");
  msa->add_option("--dense-threshold", ms_dense, "dense eigensolver cutoff");
  msa->add_option("--krylov-dim", ms_kry, "Arnoldi basis size");
  msa->add_option("--max-iter", ms_maxit, "Arnoldi restarts");
  msa->add_option("--tol", ms_tol, "eigensolver residual tolerance");

  // ----------------------------------------------------------- kspace-scan --
  auto* ksc = app.add_subcommand("kspace-scan", "momentum-space magic density over (g, delta)");
  std::string kc_grange, kc_drange, kc_out;
  int kc_mesh = 800, kc_jobs = 0;
  double kc_J = 1;
  ksc->add_option("--g-range", kc_grange, "min:max:points")->required();
  ksc->add_option("--delta-range", kc_drange, "min:max:points")->required();
  ksc->add_option("--mesh", kc_mesh, "momenta per grid point (k_n = pi n / mesh)");
  ksc->add_option("--J", kc_J, "coupling");
  ksc->add_option("--out", kc_out, "output CSV path (default stdout)");
  ksc->add_option("--jobs", kc_jobs, "worker threads");

  // -------------------------------------------------------- kspace-resolve --
  auto* krs = app.add_subcommand("kspace-resolve", "per-momentum sector magic at fixed (g, delta)");
  double kr_g = 0, kr_delta = 0, kr_J = 1;
  int kr_mesh = 800;
  std::string kr_out;
  krs->add_option("--g", kr_g, "staggered imaginary field")->required();
  krs->add_option("--delta", kr_delta, "staggered hopping imbalance")->required();
  krs->add_option("--mesh", kr_mesh, "number of momenta");
  krs->add_option("--J", kr_J, "coupling");
  krs->add_option("--out", kr_out, "output CSV path (default stdout)");

  // -------------------------------------------------------------- spectrum --
  auto* spc = app.add_subcommand("spectrum", "PT classifier: complex_fraction of the spectrum");
  spc->set_help_flag("--help", "print help");
  std::string sp_model = "nhti", sp_range, sp_out;
  int sp_L = 8;
  double sp_J = 1, sp_h = 1, sp_gamma = 0, sp_g = 0, sp_delta = 0, sp_tol = 1e-8;
  std::int64_t sp_dense = 4096;
  int sp_kry = 30, sp_maxit = 400;
  spc->add_option("--model", sp_model, "nhti|xx_real");
  spc->add_option("--L", sp_L, "chain length")->required();
  spc->add_option("--J", sp_J, "coupling");
  spc->add_option("--h", sp_h, "transverse field (nhti)");
  spc->add_option("--gamma", sp_gamma, "imaginary field (nhti, single point)");
  spc->add_option("--g", sp_g, "staggered imaginary field (xx_real)");
  spc->add_option("--delta", sp_delta, "staggered hopping imbalance (xx_real, single point)");
  auto* o_sprange = spc->add_option("--range", sp_range,
                                    "min:max:points over gamma (nhti) or delta (xx_real)");
  spc->add_option("--out", sp_out, "output CSV path (default stdout)");
  spc->add_option("--dense-threshold", sp_dense, "dense eigensolver cutoff");
  spc->add_option("--krylov-dim", sp_kry, "Arnoldi basis size");
  spc->add_option("--max-iter", sp_maxit, "Arnoldi restarts");
  spc->add_option("--tol", sp_tol, "eigensolver residual tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(scan)) {
      // Config file first, explicit flags override.
      std::map<std::string, std::string> cfg;
      if (o_cfg->count()) cfg = load_config(sc_config);
      auto s_or = [&](CLI::Option* o, std::string& var, const char* key) {
        if (!o->count() && cfg.count(key)) var = cfg[key];
      };
      auto d_or = [&](CLI::Option* o, double& var, const char* key) {
        if (!o->count() && cfg.count(key)) var = std::stod(cfg[key]);
      };
      auto i_or = [&](CLI::Option* o, auto& var, const char* key) {
        if (!o->count() && cfg.count(key)) var = static_cast<std::decay_t<decltype(var)>>(std::stoll(cfg[key]));
      };
      s_or(o_model, sc_model, "model");
      s_or(o_ax1, sc_axis1, "axis1");
      s_or(o_ax2, sc_axis2, "axis2");
      s_or(o_method, sc_method, "method");
      s_or(o_out, sc_out, "out");
      s_or(o_format, sc_format, "format");
      i_or(o_jobs, sc_jobs, "jobs");
      i_or(o_seed, sc_seed, "seed");
      i_or(o_chains, sc_chains, "chains");
      i_or(o_steps, sc_steps, "steps");
      i_or(o_burn, sc_burn, "burn");
      i_or(o_thin, sc_thin, "thin");
      d_or(o_pairp, sc_pairp, "pair_move_prob");
      i_or(o_dense, sc_dense, "dense_threshold");
      i_or(o_kry, sc_kry, "krylov_dim");
      i_or(o_maxit, sc_maxit, "max_iter");
      d_or(o_tol, sc_tol, "tol");
      i_or(o_cap, sc_cap, "magic_cap");
      if (!o_L->count() && cfg.count("L")) {
        sc_L.clear();
        for (const auto& t : split(cfg["L"], ','))
          if (!trim(t).empty()) sc_L.push_back(std::stoi(trim(t)));
      }

      nhmagic::ScanSpec spec;
      spec.model = parse_model(sc_model);
      if (sc_axis1.empty()) throw CLI::ValidationError("--axis1", "an axis is required (flag or config)");
      spec.axes.push_back(parse_axis(sc_axis1));
      if (!sc_axis2.empty()) spec.axes.push_back(parse_axis(sc_axis2));
      if (!sc_L.empty()) spec.Ls = sc_L;
      if (sc_method == "exact")
        spec.method = nhmagic::MagicMethod::exact;
      else if (sc_method == "sample")
        spec.method = nhmagic::MagicMethod::sample;
      else
        throw CLI::ValidationError("--method", "expected exact|sample");
      spec.sampler.chains = sc_chains;
      spec.sampler.steps = sc_steps;
      spec.sampler.burn_in = sc_burn;
      spec.sampler.thin = sc_thin;
      spec.sampler.seed = sc_seed;
      spec.sampler.pair_move_prob = sc_pairp;
      spec.solver.dense_threshold = sc_dense;
      spec.solver.krylov_dim = sc_kry;
      spec.solver.max_iter = sc_maxit;
      spec.solver.tol = sc_tol;
      spec.out = sc_out;
      if (sc_format == "csv")
        spec.format = nhmagic::OutputFormat::csv;
      else if (sc_format == "json")
        spec.format = nhmagic::OutputFormat::json;
      else
        throw CLI::ValidationError("--format", "expected csv|json");
      spec.jobs = sc_jobs;
      spec.magic_cap = sc_cap;
      // Fixed params from config (bare keys) and --set key=value.
      for (const char* key : {"J", "h", "gamma", "g", "delta"})
        if (cfg.count(key)) spec.base[key] = std::stod(cfg[key]);
      for (const auto& kv : sc_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
        spec.base[trim(kv.substr(0, eq))] = std::stod(kv.substr(eq + 1));
      }

      if (spec.axes.size() == 1 && spec.Ls.size() > 1) {
        const auto series = nhmagic::finite_size_series(spec);
        std::vector<nhmagic::ScanRow> table;
        for (const auto& e : series) table.insert(table.end(), e.rows.begin(), e.rows.end());
        nhmagic::emit(table, spec.format, spec.out);
        for (const auto& e : series)
          std::cout << "L=" << e.L << " peak " << spec.axes[0].name << "=" << f17(e.peak_location)
                    << " height=" << f17(e.peak_height) << " fwhm=" << f17(e.fwhm) << "\n";
        std::cout << "wrote " << table.size() << " rows to " << spec.out << "\n";
      } else {
        const auto table = nhmagic::run_scan(spec);
        nhmagic::emit(table, spec.format, spec.out);
        std::cout << "wrote " << table.size() << " rows to " << spec.out << "\n";
      }
    } else if (app.got_subcommand(mex)) {
      nhmagic::SolverOptions opts{mx_dense, mx_kry, mx_maxit, mx_tol};
      const auto gs = solve_ground(mx_model, mx_L, mx_J, mx_h, mx_gamma, mx_g, mx_delta, opts);
      int first = 0, len = mx_L;
      if (!mx_region.empty()) {
        const auto [a, b] = parse_region(mx_region);
        first = a;
        len = b - a + 1;
      }
      json out;
      out["model"] = mx_model;
      out["L"] = mx_L;
      out["region"] = {first, first + len - 1};
      out["energy_re"] = gs.energy.real();
      out["energy_im"] = gs.energy.imag();
      out["tie_flag"] = gs.tie_flag;
      const bool full = (first == 0 && len == mx_L);
      if (full) {
        out["M2"] = nhmagic::sre2_pure(gs.psi, mx_cap, 0);
        out["purity"] = 1.0;
      } else {
        const auto r = nhmagic::reduced_density_matrix(gs.psi, first, len);
        const auto spec_c = nhmagic::pauli_coefficients(r, std::min(mx_cap, 8));
        out["M2"] = nhmagic::sre2(spec_c);
        out["purity"] = nhmagic::purity(r);
      }
      // Coefficient listing needs the dense table; feasible for short regions.
      json tops = json::array();
      if (len <= 8) {
        const auto r = nhmagic::reduced_density_matrix(gs.psi, first, len);
        const auto spec_c = nhmagic::pauli_coefficients(r, 8);
        std::vector<std::uint64_t> idx(spec_c.c.size());
        for (std::uint64_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) {
          const double da = std::abs(spec_c.c[a]), db = std::abs(spec_c.c[b]);
          if (da != db) return da > db;
          return a < b;
        });
        for (std::size_t t = 0; t < idx.size() && t < 8; ++t)
          tops.push_back({nhmagic::pauli_render(nhmagic::PauliString(len, idx[t])),
                          spec_c.c[idx[t]]});
      }
      out["top_coefficients"] = tops;
      std::cout << out.dump(1) << "\n";
    } else if (app.got_subcommand(msa)) {
      nhmagic::SolverOptions opts{ms_dense, ms_kry, ms_maxit, ms_tol};
      const auto gs = solve_ground(ms_model, ms_L, ms_J, ms_h, ms_gamma, ms_g, ms_delta, opts);
      int first = 0, len = ms_L;
      if (!ms_region.empty()) {
        const auto [a, b] = parse_region(ms_region);
        first = a;
        len = b - a + 1;
      }
      nhmagic::SamplerConfig cfg;
      cfg.chains = ms_chains;
      cfg.steps = ms_steps;
      cfg.burn_in = ms_burn;
      cfg.thin = ms_thin;
      cfg.seed = ms_seed;
      cfg.pair_move_prob = ms_pairp;
      const auto est = nhmagic::estimate_m2(gs.psi, first, len, cfg);
      json out;
      out["model"] = ms_model;
      out["L"] = ms_L;
      out["region"] = {first, first + len - 1};
      out["m2"] = est.m2;
      out["stderr"] = est.stderr_;
      out["acceptance_rate"] = est.acceptance_rate;
      out["per_chain_means"] = est.per_chain_means;
      std::cout << out.dump(1) << "\n";
    } else if (app.got_subcommand(ksc)) {
      nhmagic::ScanSpec spec;
      spec.model = nhmagic::Model::xx_kspace;
      spec.axes.push_back(parse_range("g", kc_grange));
      spec.axes.push_back(parse_range("delta", kc_drange));
      spec.Ls = {kc_mesh};
      spec.base["J"] = kc_J;
      spec.jobs = kc_jobs;
      spec.out = kc_out;  // enables checkpointing when set
      const auto table = nhmagic::run_scan(spec);
      std::ostringstream os;
      os << "# layout: grid-major; rows ordered by delta (outer), then g (fastest)\n";
      os << "g,delta,m2_density\n";
      for (const auto& r : table) {
        double g = 0, d = 0;
        for (const auto& kv : r.params) {
          if (kv.first == "g") g = kv.second;
          if (kv.first == "delta") d = kv.second;
        }
        os << f17(g) << ',' << f17(d) << ',' << f17(r.m2) << '\n';
      }
      if (kc_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(kc_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + kc_out + "' for writing");
        f << os.str();
        std::cout << "wrote " << table.size() << " rows to " << kc_out << "\n";
      }
    } else if (app.got_subcommand(krs)) {
      const nhmagic::XXParams p{kr_J, kr_delta, kr_g};
      const auto table = nhmagic::momentum_resolved_magic(p, nhmagic::KGrid(kr_mesh));
      std::ostringstream os;
      os << "k,magic\n";
      for (const auto& [k, m] : table) os << f17(k) << ',' << f17(m) << '\n';
      if (kr_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(kr_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + kr_out + "' for writing");
        f << os.str();
        std::cout << "wrote " << table.size() << " rows to " << kr_out << "\n";
      }
    } else if (app.got_subcommand(spc)) {
      nhmagic::SolverOptions opts{sp_dense, sp_kry, sp_maxit, sp_tol};
      const bool is_nhti = (sp_model == "nhti");
      if (!is_nhti && sp_model != "xx_real")
        throw CLI::ValidationError("--model", "expected nhti|xx_real");
      if (o_sprange->count()) {
        const auto ax = parse_range(is_nhti ? "gamma" : "delta", sp_range);
        std::vector<double> xs;
        for (int i = 0; i < ax.points; ++i) xs.push_back(ax.value(i));
        auto build = [&](double x) {
          return is_nhti ? nhmagic::build_nhti(nhmagic::IsingParams{sp_J, sp_h, x, sp_L})
                         : nhmagic::build_xx_spin(nhmagic::XXParams{sp_J, x, sp_g, sp_L});
        };
        const auto rows = nhmagic::pt_transition_scan(xs, build, opts);
        std::ostringstream os;
        os << (is_nhti ? "gamma" : "delta") << ",complex_fraction\n";
        for (const auto& [x, cf] : rows) os << f17(x) << ',' << f17(cf) << '\n';
        if (sp_out.empty()) {
          std::cout << os.str();
        } else {
          std::ofstream f(sp_out, std::ios::binary);
          if (!f) throw std::runtime_error("cannot open '" + sp_out + "' for writing");
          f << os.str();
          std::cout << "wrote " << rows.size() << " rows to " << sp_out << "\n";
        }
      } else {
        const auto H = is_nhti
                           ? nhmagic::build_nhti(nhmagic::IsingParams{sp_J, sp_h, sp_gamma, sp_L})
                           : nhmagic::build_xx_spin(nhmagic::XXParams{sp_J, sp_delta, sp_g, sp_L});
        const auto rep = nhmagic::full_spectrum(H, opts);
        json out;
        out["model"] = sp_model;
        out["L"] = sp_L;
        out["complex_fraction"] = rep.complex_fraction;
        out["max_imag"] = rep.max_imag;
        out["conjugation_closed"] = rep.conjugation_closed;
        out["tol"] = rep.tol;
        json ev = json::array();
        for (const auto& w : rep.eigenvalues) ev.push_back({w.real(), w.imag()});
        out["eigenvalues"] = ev;
        std::cout << out.dump(1) << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
