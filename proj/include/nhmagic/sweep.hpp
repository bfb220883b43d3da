#pragma once
// Parameter-grid scans: build model -> ground state -> magic for every grid
// point, in parallel over points, with deterministic grid-major output,
// row-level checkpointing, and CSV/JSON emission.
//
// Ordering contract: rows are emitted L (outer), then the second axis, then
// the first axis (fastest). Every CSV starts with a comment line restating
// this. wall_time is always written as 0 so identical inputs produce
// byte-identical files (determinism outranks a timing column; use external
// profiling for timings).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>  // vendored single-header nlohmann::json

#include "eigensolver.hpp"
#include "kspace.hpp"
#include "magic.hpp"
#include "model.hpp"
#include "pauli.hpp"
#include "sampler.hpp"

namespace nhmagic {

enum class Model { nhti, xx_real, xx_kspace };
enum class MagicMethod { exact, sample };
enum class OutputFormat { csv, json };

inline const char* model_name(Model m) {
  switch (m) {
    case Model::nhti: return "nhti";
    case Model::xx_real: return "xx_real";
    default: return "xx_kspace";
  }
}

struct Axis {
  std::string name;
  double min = 0, max = 0;
  int points = 1;

  double value(int i) const {
    if (points <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
};

struct ScanSpec {
  Model model = Model::nhti;
  std::vector<Axis> axes;           // one or two
  std::vector<int> Ls = {10};       // chain lengths (momentum mesh for xx_kspace)
  MagicMethod method = MagicMethod::exact;
  SamplerConfig sampler;            // used when method == sample
  SolverOptions solver;
  std::map<std::string, double> base;  // fixed parameters; defaults J=1,h=1,gamma=0,g=0,delta=0
  std::string out;                  // output path; "" disables file output and checkpointing
  OutputFormat format = OutputFormat::csv;
  int jobs = 0;                     // 0: NH_MAGIC_JOBS env var, then hardware concurrency
  int magic_cap = 14;               // exact-enumeration guard forwarded to sre2_pure
  std::int64_t max_points = 200000; // budget guard on |grid| x |Ls|

  std::vector<std::string> param_names() const {
    if (model == Model::nhti) return {"J", "h", "gamma"};
    return {"J", "g", "delta"};
  }

  void validate() const {
    if (axes.empty() || axes.size() > 2)
      throw std::invalid_argument("ScanSpec: one or two axes required");
    const auto names = param_names();
    for (const auto& ax : axes) {
      if (ax.points < 1) throw std::invalid_argument("ScanSpec: axis points >= 1 required");
      bool known = false;
      for (const auto& n : names) known = known || n == ax.name;
      if (!known)
        throw std::invalid_argument("ScanSpec: axis '" + ax.name + "' not a parameter of " +
                                    model_name(model));
    }
    if (axes.size() == 2 && axes[0].name == axes[1].name)
      throw std::invalid_argument("ScanSpec: axes must differ");
    for (const auto& kv : base) {
      bool known = false;
      for (const auto& n : names) known = known || n == kv.first;
      if (!known)
        throw std::invalid_argument("ScanSpec: base parameter '" + kv.first +
                                    "' not a parameter of " + model_name(model));
    }
    if (Ls.empty()) throw std::invalid_argument("ScanSpec: L list empty");
    for (int L : Ls) {
      if (L < 2) throw std::invalid_argument("ScanSpec: L >= 2 required");
      if (model == Model::xx_real && L % 2 != 0)
        throw std::invalid_argument("ScanSpec: L must be even for xx_real");
    }
    std::int64_t total = static_cast<std::int64_t>(Ls.size());
    for (const auto& ax : axes) total *= ax.points;
    if (total > max_points)
      throw std::invalid_argument("ScanSpec: grid x L exceeds max_points budget");
    if (method == MagicMethod::sample && model == Model::xx_kspace)
      throw std::invalid_argument("ScanSpec: sampling is pointless in k-space (exact is O(grid))");
  }

  /// FNV-1a over a canonical serialization; keys the checkpoint file.
  std::uint64_t fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    os << model_name(model) << '|' << static_cast<int>(method) << '|';
    for (const auto& ax : axes) os << ax.name << ',' << ax.min << ',' << ax.max << ',' << ax.points << ';';
    os << '|';
    for (int L : Ls) os << L << ',';
    os << '|';
    for (const auto& kv : base) os << kv.first << '=' << kv.second << ',';
    os << '|' << sampler.chains << ',' << sampler.steps << ',' << sampler.burn_in << ','
       << sampler.thin << ',' << sampler.seed << ',' << sampler.pair_move_prob;
    os << '|' << solver.dense_threshold << ',' << solver.krylov_dim << ',' << solver.max_iter
       << ',' << solver.tol << '|' << magic_cap;
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : os.str()) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

struct ScanRow {
  std::string model;
  int L = 0;
  std::vector<std::pair<std::string, double>> params;  // full tuple, fixed order
  double energy_re = std::numeric_limits<double>::quiet_NaN();
  double energy_im = std::numeric_limits<double>::quiet_NaN();
  double m2 = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = 0;
  int tie_flag = 0;
  double purity = std::numeric_limits<double>::quiet_NaN();
  double wall_time = 0;  // deterministically 0; see header comment
  std::string status = "ok";
};

namespace detail {

inline std::string ascii_sanitize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (ch == '\n' || ch == '\r')
      out += ' ';
    else if (u < 0x20 || u > 0x7e)
      out += '?';
    else
      out += ch;
  }
  return out;
}

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline nlohmann::json row_to_json(const ScanRow& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["L"] = r.L;
  for (const auto& kv : r.params) j[kv.first] = kv.second;
  j["energy_re"] = r.energy_re;
  j["energy_im"] = r.energy_im;
  j["m2"] = r.m2;
  j["stderr"] = r.stderr_;
  j["tie_flag"] = r.tie_flag;
  j["purity"] = r.purity;
  j["wall_time"] = r.wall_time;
  j["status"] = r.status;
  return j;
}

inline double json_num(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

/// Checkpoint row serialization keeps params as an ordered array so the row
/// round-trips exactly (nlohmann objects sort keys).
inline nlohmann::json ckpt_row(const ScanRow& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["L"] = r.L;
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& kv : r.params) ps.push_back({kv.first, kv.second});
  j["params"] = ps;
  j["energy_re"] = r.energy_re;
  j["energy_im"] = r.energy_im;
  j["m2"] = r.m2;
  j["stderr"] = r.stderr_;
  j["tie_flag"] = r.tie_flag;
  j["purity"] = r.purity;
  j["status"] = r.status;
  return j;
}

inline ScanRow ckpt_parse_row(const nlohmann::json& j) {
  ScanRow r;
  r.model = j.at("model").get<std::string>();
  r.L = j.at("L").get<int>();
  for (const auto& p : j.at("params"))
    r.params.emplace_back(p.at(0).get<std::string>(), json_num(p.at(1)));
  r.energy_re = json_num(j.at("energy_re"));
  r.energy_im = json_num(j.at("energy_im"));
  r.m2 = json_num(j.at("m2"));
  r.stderr_ = json_num(j.at("stderr"));
  r.tie_flag = j.at("tie_flag").get<int>();
  r.purity = json_num(j.at("purity"));
  r.status = j.at("status").get<std::string>();
  return r;
}

inline std::string fp_hex(std::uint64_t fp) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

inline int resolve_jobs(int jobs_flag) {
  if (jobs_flag > 0) return jobs_flag;
  if (const char* env = std::getenv("NH_MAGIC_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace detail

/// Compute one grid point end-to-end. Failures land in row.status.
inline ScanRow compute_row(const ScanSpec& spec, int L, const std::vector<double>& axis_vals,
                           std::int64_t flat_index) {
  ScanRow row;
  row.model = model_name(spec.model);
  row.L = L;
  std::map<std::string, double> vals = {{"J", 1}, {"h", 1}, {"gamma", 0}, {"g", 0}, {"delta", 0}};
  for (const auto& kv : spec.base) vals[kv.first] = kv.second;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) vals[spec.axes[a].name] = axis_vals[a];
  for (const auto& name : spec.param_names()) row.params.emplace_back(name, vals.at(name));

  try {
    if (spec.model == Model::xx_kspace) {
      XXParams p{vals.at("J"), vals.at("delta"), vals.at("g")};
      KGrid grid(L);
      double msum = 0;
      cplx esum(0, 0);
      bool tie = false;
      for (double k : grid.points) {
        const SectorState s = sector_ground_state(k, p);
        msum += sector_magic(s);
        esum += s.energy;
        tie = tie || s.tie;
      }
      const double n = static_cast<double>(grid.points.size());
      row.m2 = msum / n;  // magic density (per momentum cell)
      row.energy_re = esum.real() / n;
      row.energy_im = esum.imag() / n;
      row.tie_flag = tie ? 1 : 0;
      row.purity = 1.0;
      row.stderr_ = 0;
    } else {
      const SparseOperator H =
          (spec.model == Model::nhti)
              ? build_nhti(IsingParams{vals.at("J"), vals.at("h"), vals.at("gamma"), L})
              : build_xx_spin(XXParams{vals.at("J"), vals.at("delta"), vals.at("g"), L});
      const GroundState gs = ground_state(H, spec.solver);
      row.energy_re = gs.energy.real();
      row.energy_im = gs.energy.imag();
      row.tie_flag = gs.tie_flag ? 1 : 0;
      row.purity = 1.0;  // right ground state, normalized
      if (spec.method == MagicMethod::exact) {
        row.m2 = sre2_pure(gs.psi, spec.magic_cap, 1);
        row.stderr_ = 0;
      } else {
        SamplerConfig cfg = spec.sampler;
        // Independent, position-keyed stream per grid point (resume-stable).
        cfg.seed = detail::splitmix64(spec.sampler.seed ^
                                      detail::splitmix64(0x7363616eull + static_cast<std::uint64_t>(flat_index)));
        const MagicEstimate est = estimate_m2(gs.psi, 0, L, cfg, 1);
        row.m2 = est.m2;
        row.stderr_ = est.stderr_;
      }
    }
  } catch (const std::exception& e) {
    row.status = detail::ascii_sanitize(e.what());
  }
  return row;
}

/// Run the full grid. Grid-major order: L outer, second axis, first axis
/// fastest. With spec.out set, completed rows stream to <out>.ckpt and a
/// re-run with an identical spec skips them; the returned table is identical
/// to a fresh run either way.
inline std::vector<ScanRow> run_scan(const ScanSpec& spec) {
  spec.validate();
  const int n1 = spec.axes[0].points;
  const int n2 = spec.axes.size() == 2 ? spec.axes[1].points : 1;
  const std::int64_t nL = static_cast<std::int64_t>(spec.Ls.size());
  const std::int64_t total = nL * n2 * n1;

  // Checkpoint load.
  const std::string ckpt_path = spec.out.empty() ? "" : spec.out + ".ckpt";
  const std::uint64_t fp = spec.fingerprint();
  std::map<std::int64_t, ScanRow> done;
  if (!ckpt_path.empty()) {
    std::ifstream in(ckpt_path);
    if (in) {
      std::string line;
      bool head_ok = false;
      if (std::getline(in, line)) {
        try {
          const auto j = nlohmann::json::parse(line);
          head_ok = j.at("fingerprint").get<std::string>() == detail::fp_hex(fp);
        } catch (...) {
          head_ok = false;
        }
      }
      if (head_ok) {
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          try {
            const auto j = nlohmann::json::parse(line);
            done[j.at("f").get<std::int64_t>()] = detail::ckpt_parse_row(j.at("row"));
          } catch (...) {
            break;  // torn trailing line from an interrupted run; recompute the rest
          }
        }
      } else {
        done.clear();
      }
    }
  }

  std::ofstream ck;
  if (!ckpt_path.empty()) {
    if (done.empty()) {
      ck.open(ckpt_path, std::ios::trunc);  // fresh or stale-fingerprint file
      ck << nlohmann::json{{"fingerprint", detail::fp_hex(fp)}}.dump() << '\n';
      ck.flush();
    } else {
      ck.open(ckpt_path, std::ios::app);
    }
    if (!ck) throw std::runtime_error("run_scan: cannot open checkpoint " + ckpt_path);
  }

  std::vector<std::int64_t> todo;
  for (std::int64_t f = 0; f < total; ++f)
    if (!done.count(f)) todo.push_back(f);

  std::vector<std::optional<ScanRow>> slots(total);
  std::mutex ck_mu;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= todo.size()) return;
      const std::int64_t f = todo[t];
      const int li = static_cast<int>(f / (static_cast<std::int64_t>(n2) * n1));
      const int j = static_cast<int>((f / n1) % n2);
      const int i = static_cast<int>(f % n1);
      std::vector<double> av = {spec.axes[0].value(i)};
      if (spec.axes.size() == 2) av.push_back(spec.axes[1].value(j));
      ScanRow row = compute_row(spec, spec.Ls[li], av, f);
      if (ck.is_open()) {
        std::lock_guard<std::mutex> lk(ck_mu);
        nlohmann::json j2;
        j2["f"] = f;
        j2["row"] = detail::ckpt_row(row);
        ck << j2.dump() << '\n';
        ck.flush();
      }
      slots[f] = std::move(row);
    }
  };

  const int jobs = std::min<std::int64_t>(detail::resolve_jobs(spec.jobs),
                                          std::max<std::int64_t>(1, static_cast<std::int64_t>(todo.size())));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<ScanRow> table;
  table.reserve(total);
  for (std::int64_t f = 0; f < total; ++f) {
    auto it = done.find(f);
    table.push_back(it != done.end() ? it->second : std::move(*slots[f]));
  }
  return table;
}

struct SeriesEntry {
  int L = 0;
  std::vector<ScanRow> rows;
  double peak_location = std::numeric_limits<double>::quiet_NaN();
  double peak_height = std::numeric_limits<double>::quiet_NaN();
  double fwhm = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Full width at half maximum along a 1-D cut by linear interpolation; +inf
/// when either flank never crosses half maximum within the window.
inline void peak_diagnostics(SeriesEntry& e, const std::string& axis_name) {
  std::vector<double> x, y;
  for (const auto& r : e.rows) {
    if (r.status != "ok" || !std::isfinite(r.m2)) continue;
    for (const auto& kv : r.params)
      if (kv.first == axis_name) x.push_back(kv.second);
    y.push_back(r.m2);
  }
  if (y.empty()) return;
  std::size_t p = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[p]) p = i;
  e.peak_location = x[p];
  e.peak_height = y[p];
  const double half = y[p] / 2;
  auto cross = [&](bool left) -> double {
    if (left) {
      for (std::size_t i = p; i-- > 0;)
        if (y[i] <= half)
          return x[i] + (x[i + 1] - x[i]) * (half - y[i]) / (y[i + 1] - y[i]);
    } else {
      for (std::size_t i = p + 1; i < y.size(); ++i)
        if (y[i] <= half)
          return x[i - 1] + (x[i] - x[i - 1]) * (half - y[i - 1]) / (y[i] - y[i - 1]);
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double xl = cross(true), xr = cross(false);
  e.fwhm = (std::isnan(xl) || std::isnan(xr)) ? std::numeric_limits<double>::infinity()
                                              : xr - xl;
}

}  // namespace detail

/// Per-L cut with peak diagnostics. Requires a single-axis spec and an
/// ascending L list.
inline std::vector<SeriesEntry> finite_size_series(const ScanSpec& spec) {
  if (spec.axes.size() != 1)
    throw std::invalid_argument("finite_size_series: exactly one axis required");
  for (std::size_t i = 1; i < spec.Ls.size(); ++i)
    if (spec.Ls[i] <= spec.Ls[i - 1])
      throw std::invalid_argument("finite_size_series: L list must ascend");
  const std::vector<ScanRow> table = run_scan(spec);
  const int n1 = spec.axes[0].points;
  std::vector<SeriesEntry> out;
  for (std::size_t li = 0; li < spec.Ls.size(); ++li) {
    SeriesEntry e;
    e.L = spec.Ls[li];
    e.rows.assign(table.begin() + static_cast<std::ptrdiff_t>(li) * n1,
                  table.begin() + static_cast<std::ptrdiff_t>(li + 1) * n1);
    detail::peak_diagnostics(e, spec.axes[0].name);
    out.push_back(std::move(e));
  }
  return out;
}

/// Serialize a table. CSV: layout comment, header row, RFC-4180 quoting,
/// floats at 17 significant digits. JSON: array of row objects. Identical
/// tables yield byte-identical files.
inline void emit(const std::vector<ScanRow>& table, OutputFormat fmt, const std::string& path) {
  if (table.empty()) throw std::invalid_argument("emit: table is empty");
  std::ofstream os(path, std::ios::binary);  // binary: no platform newline translation
  if (!os) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  if (fmt == OutputFormat::csv) {
    os << "# layout: grid-major; rows ordered by L (outer), then second axis, then first axis (fastest)\n";
    os << "model,L";
    for (const auto& kv : table.front().params) os << ',' << detail::csv_quote(kv.first);
    os << ",energy_re,energy_im,m2,stderr,tie_flag,purity,wall_time,status\n";
    for (const auto& r : table) {
      os << detail::csv_quote(r.model) << ',' << r.L;
      for (const auto& kv : r.params) os << ',' << detail::fmt17(kv.second);
      os << ',' << detail::fmt17(r.energy_re) << ',' << detail::fmt17(r.energy_im) << ','
         << detail::fmt17(r.m2) << ',' << detail::fmt17(r.stderr_) << ',' << r.tie_flag << ','
         << detail::fmt17(r.purity) << ',' << detail::fmt17(r.wall_time) << ','
         << detail::csv_quote(detail::ascii_sanitize(r.status)) << '\n';
    }
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : table) arr.push_back(detail::row_to_json(r));
    os << arr.dump(1) << '\n';
  }
  if (!os) throw std::runtime_error("emit: write failed for '" + path + "'");
}

}  // namespace nhmagic
