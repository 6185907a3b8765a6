// Command-line front end: resolves a JSON config (flags win over file values),
// drives the library layers, and writes self-describing run directories. Every
// run directory carries a manifest.json whose config snapshot and seed
// reproduce the data files byte-identically at any thread count.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vanhove/bounds.hpp"
#include "vanhove/diagrammatics.hpp"
#include "vanhove/effective.hpp"
#include "vanhove/ensemble.hpp"
#include "vanhove/model.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

// Usage and configuration problems exit with code 2; computation failures
// surface as other exceptions and exit with code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips the double; bit-identical runs then
// give byte-identical files.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp(const char* fmt) {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, fmt, &tm);
  return buf;
}

// ---------------------------------------------------------------- config ---

struct RunConfig {
  vanhove::ModelConfig model;
  int members = 32;
  int site = 1;
  double band_lo = 0.3;
  double band_hi = 0.7;
  double t_max_scaled = 0.3;          // grid upper end in T = lambda^2 t
  int grid_points = 61;
  double window_lo = 0.02;            // rate-fit window in T
  double window_hi = 0.15;
  std::vector<double> couplings{0.08, 0.05, 0.03};  // sweep rows
  std::uint64_t master_seed = vanhove::kDefaultMasterSeed;
  int threads = 1;
};

void require_known_keys(const json& obj,
                        std::initializer_list<const char*> allowed,
                        const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw ConfigError("unknown config key: " + where + item.key());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  // A previous run's manifest is a valid config: use its resolved snapshot.
  const json root = doc.contains("config_snapshot") ? doc["config_snapshot"] : doc;
  try {
    require_known_keys(
        root, {"model", "ensemble", "grid", "fit", "sweep", "master_seed"}, "");
    const json m = root.value("model", json::object());
    require_known_keys(m, {"n_levels", "coupling", "edge_cutoff"}, "model.");
    cfg.model.n_levels = m.value("n_levels", cfg.model.n_levels);
    cfg.model.coupling = m.value("coupling", cfg.model.coupling);
    cfg.model.edge_cutoff = m.value("edge_cutoff", cfg.model.edge_cutoff);
    const json e = root.value("ensemble", json::object());
    require_known_keys(
        e, {"members", "site", "band_lo", "band_hi", "threads"}, "ensemble.");
    cfg.members = e.value("members", cfg.members);
    cfg.site = e.value("site", cfg.site);
    cfg.band_lo = e.value("band_lo", cfg.band_lo);
    cfg.band_hi = e.value("band_hi", cfg.band_hi);
    cfg.threads = e.value("threads", cfg.threads);
    const json g = root.value("grid", json::object());
    require_known_keys(g, {"t_max_scaled", "points"}, "grid.");
    cfg.t_max_scaled = g.value("t_max_scaled", cfg.t_max_scaled);
    cfg.grid_points = g.value("points", cfg.grid_points);
    const json f = root.value("fit", json::object());
    require_known_keys(f, {"window_lo", "window_hi"}, "fit.");
    cfg.window_lo = f.value("window_lo", cfg.window_lo);
    cfg.window_hi = f.value("window_hi", cfg.window_hi);
    const json s = root.value("sweep", json::object());
    require_known_keys(s, {"couplings"}, "sweep.");
    cfg.couplings = s.value("couplings", cfg.couplings);
    cfg.master_seed = root.value("master_seed", cfg.master_seed);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.model.n_levels < 2) throw ConfigError("model.n_levels must be >= 2");
  if (cfg.model.coupling <= 0.0) throw ConfigError("model.coupling must be > 0");
  if (cfg.members < 1) throw ConfigError("ensemble.members must be >= 1");
  if (cfg.threads < 1) throw ConfigError("ensemble.threads must be >= 1");
  if (cfg.grid_points < 2) throw ConfigError("grid.points must be >= 2");
  if (cfg.t_max_scaled <= 0.0) throw ConfigError("grid.t_max_scaled must be > 0");
  if (cfg.couplings.empty()) throw ConfigError("sweep.couplings must be non-empty");
}

json config_snapshot(const RunConfig& cfg, bool with_sweep) {
  json model;
  model["n_levels"] = cfg.model.n_levels;
  model["coupling"] = cfg.model.coupling;
  model["edge_cutoff"] = cfg.model.edge_cutoff;
  json ensemble;
  ensemble["members"] = cfg.members;
  ensemble["site"] = cfg.site;
  ensemble["band_lo"] = cfg.band_lo;
  ensemble["band_hi"] = cfg.band_hi;
  ensemble["threads"] = cfg.threads;
  json grid;
  grid["t_max_scaled"] = cfg.t_max_scaled;
  grid["points"] = cfg.grid_points;
  json fit;
  fit["window_lo"] = cfg.window_lo;
  fit["window_hi"] = cfg.window_hi;
  json out;
  out["model"] = std::move(model);
  out["ensemble"] = std::move(ensemble);
  out["grid"] = std::move(grid);
  out["fit"] = std::move(fit);
  if (with_sweep) {
    json sweep;
    sweep["couplings"] = cfg.couplings;
    out["sweep"] = std::move(sweep);
  }
  out["master_seed"] = cfg.master_seed;
  return out;
}

// -------------------------------------------------------------- manifest ---

struct OutputRecord {
  std::string name;
  std::uint64_t checksum = 0;
};

struct RunDirectory {
  std::filesystem::path dir;
  std::string run_id;
  std::string started;
  std::vector<OutputRecord> outputs;
};

RunDirectory open_run_directory(const std::string& out_flag,
                                const json& snapshot) {
  RunDirectory run;
  run.started = utc_timestamp("%Y-%m-%dT%H:%M:%SZ");
  run.run_id = utc_timestamp("%Y%m%dT%H%M%SZ") + "-" +
               hex64(fnv1a64(snapshot.dump())).substr(8);
  run.dir = out_flag.empty() ? std::filesystem::path("runs") / run.run_id
                             : std::filesystem::path(out_flag);
  std::filesystem::create_directories(run.dir);
  return run;
}

void write_output(RunDirectory& run, const std::string& name,
                  const std::string& bytes) {
  const auto path = run.dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
  out.close();
  run.outputs.push_back({name, fnv1a64(bytes)});
  std::printf("wrote %s\n", path.string().c_str());
}

void write_manifest(RunDirectory& run, const std::string& command,
                    const json& snapshot, std::uint64_t master_seed) {
  json manifest;
  manifest["run_id"] = run.run_id;
  manifest["command"] = command;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["started"] = run.started;
  manifest["finished"] = utc_timestamp("%Y-%m-%dT%H:%M:%SZ");
  manifest["master_seed"] = master_seed;
  manifest["config_snapshot"] = snapshot;
  json outputs = json::array();
  for (const auto& rec : run.outputs) {
    json entry;
    entry["file"] = rec.name;
    entry["fnv1a64"] = hex64(rec.checksum);
    outputs.push_back(std::move(entry));
  }
  manifest["outputs"] = std::move(outputs);
  const auto path = run.dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  out << manifest.dump(2) << "\n";
  std::printf("wrote %s\n", path.string().c_str());
}

// ------------------------------------------------------------- renderers ---

std::vector<double> scaled_grid(const RunConfig& cfg) {
  std::vector<double> T(cfg.grid_points);
  for (int i = 0; i < cfg.grid_points; ++i) {
    T[i] = cfg.t_max_scaled * i / (cfg.grid_points - 1);
  }
  return T;
}

std::string trace_csv(const vanhove::EnsembleStats& s) {
  std::string out = "t,T,p1_mean,p1_stderr,p2_mean,p2_stderr,norm_mean\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out += format_double(s.times[i]) + "," + format_double(s.scaled_times[i]) +
           "," + format_double(s.p1_mean[i]) + "," +
           format_double(s.p1_stderr[i]) + "," + format_double(s.p2_mean[i]) +
           "," + format_double(s.p2_stderr[i]) + "," +
           format_double(s.norm_mean[i]) + "\n";
  }
  return out;
}

std::string sweep_csv(const std::vector<vanhove::SweepRow>& rows) {
  std::string out = "N,lambda,S,rate,rate_stderr,equilibrium_p1,r_squared\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n_levels) + "," + format_double(r.coupling) + "," +
           std::to_string(r.members) + "," + format_double(r.rate) + "," +
           format_double(r.rate_stderr) + "," +
           format_double(r.equilibrium_p1) + "," +
           format_double(r.r_squared) + "\n";
  }
  return out;
}

// Line chart of the relaxation trace: ensemble p1/p2 against T with the
// closed-form solution overlaid dashed. Plain SVG, fixed-precision
// coordinates, no timestamps: byte-stable across reruns.
std::string trace_svg(const vanhove::EnsembleStats& s) {
  const double left = 60.0, right = 620.0, top = 30.0, bottom = 380.0;
  const double t_max = s.scaled_times.empty() ? 1.0 : s.scaled_times.back();
  const auto x_of = [&](double T) {
    return left + (right - left) * (t_max > 0.0 ? T / t_max : 0.0);
  };
  const auto y_of = [&](double p) { return bottom - (bottom - top) * p; };
  const auto coord = [](double v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const auto polyline = [&](const std::vector<double>& ys, const char* style) {
    std::string pts;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      pts += coord(x_of(s.scaled_times[i])) + "," + coord(y_of(ys[i])) + " ";
    }
    return "  <polyline fill=\"none\" " + std::string(style) + " points=\"" +
           pts + "\"/>\n";
  };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
      "viewBox=\"0 0 640 420\">\n"
      "  <rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const std::string y = coord(y_of(p));
    svg += "  <line x1=\"" + coord(left) + "\" y1=\"" + y + "\" x2=\"" +
           coord(right) + "\" y2=\"" + y +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + coord(left - 8.0) + "\" y=\"" + y +
           "\" font-size=\"12\" text-anchor=\"end\" dy=\"4\">" +
           format_double(p) + "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double T = t_max * i / 4.0;
    const std::string x = coord(x_of(T));
    svg += "  <line x1=\"" + x + "\" y1=\"" + coord(bottom) + "\" x2=\"" + x +
           "\" y2=\"" + coord(bottom + 5.0) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + x + "\" y=\"" + coord(bottom + 20.0) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + format_double(T) +
           "</text>\n";
  }
  svg += "  <line x1=\"" + coord(left) + "\" y1=\"" + coord(top) + "\" x2=\"" +
         coord(left) + "\" y2=\"" + coord(bottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "  <line x1=\"" + coord(left) + "\" y1=\"" + coord(bottom) +
         "\" x2=\"" + coord(right) + "\" y2=\"" + coord(bottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const vanhove::Populations p0{s.p1_mean.empty() ? 1.0 : s.p1_mean.front(),
                                s.p2_mean.empty() ? 0.0 : s.p2_mean.front()};
  std::vector<double> overlay(s.scaled_times.size());
  for (std::size_t i = 0; i < overlay.size(); ++i) {
    overlay[i] = vanhove::closed_form(s.scaled_times[i], p0).p1;
  }
  svg += polyline(s.p1_mean, "stroke=\"#1f77b4\" stroke-width=\"2\"");
  svg += polyline(s.p2_mean, "stroke=\"#d62728\" stroke-width=\"2\"");
  svg += polyline(overlay,
                  "stroke=\"black\" stroke-width=\"1.5\" "
                  "stroke-dasharray=\"6 4\"");

  svg +=
      "  <text x=\"340\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">"
      "site populations vs T</text>\n"
      "  <text x=\"340\" y=\"412\" font-size=\"12\" "
      "text-anchor=\"middle\">T</text>\n"
      "  <text x=\"540\" y=\"50\" font-size=\"12\" fill=\"#1f77b4\">p1 "
      "ensemble</text>\n"
      "  <text x=\"540\" y=\"66\" font-size=\"12\" fill=\"#d62728\">p2 "
      "ensemble</text>\n"
      "  <text x=\"540\" y=\"82\" font-size=\"12\">p1 closed form</text>\n"
      "</svg>\n";
  return svg;
}

// ------------------------------------------------------------- commands ---

void cmd_simulate(const RunConfig& cfg, const std::string& out_flag) {
  vanhove::EnsembleConfig ec;
  ec.model = cfg.model;
  ec.members = cfg.members;
  ec.site = cfg.site;
  ec.band_lo = cfg.band_lo;
  ec.band_hi = cfg.band_hi;
  ec.master_seed = cfg.master_seed;
  ec.threads = cfg.threads;
  const auto T = scaled_grid(cfg);
  ec.times.resize(T.size());
  // Reciprocal multiplication, exactly as the sweep path computes it, so a
  // degenerate sweep and a simulate trace agree bit for bit.
  const double inv = 1.0 / (cfg.model.coupling * cfg.model.coupling);
  for (std::size_t i = 0; i < T.size(); ++i) ec.times[i] = T[i] * inv;

  const auto result = vanhove::run_ensemble(ec);
  const json snapshot = config_snapshot(cfg, false);
  RunDirectory run = open_run_directory(out_flag, snapshot);
  write_output(run, "trace.csv", trace_csv(result.stats));
  write_output(run, "trace.svg", trace_svg(result.stats));
  write_manifest(run, "simulate", snapshot, cfg.master_seed);

  try {
    const auto fit = vanhove::fit_rate(result.stats, cfg.window_lo, cfg.window_hi);
    const double jack =
        vanhove::jackknife_rate_stderr(result, cfg.window_lo, cfg.window_hi);
    std::printf("rate=%s rate_stderr=%s equilibrium_p1=%s r_squared=%s\n",
                format_double(fit.rate).c_str(), format_double(jack).c_str(),
                format_double(fit.equilibrium_p1).c_str(),
                format_double(fit.r_squared).c_str());
  } catch (const std::exception& e) {
    std::printf("rate fit skipped: %s\n", e.what());
  }
}

void cmd_sweep(const RunConfig& cfg, const std::string& out_flag) {
  const auto T = scaled_grid(cfg);
  std::vector<vanhove::SweepRow> rows;
  rows.reserve(cfg.couplings.size());
  for (double coupling : cfg.couplings) {
    // One row per coupling so a failed fit flags its row instead of
    // aborting the table.
    try {
      const auto row =
          vanhove::vanhove_sweep(cfg.model, {coupling}, cfg.members, T,
                                 cfg.master_seed, cfg.threads, cfg.window_lo,
                                 cfg.window_hi);
      rows.push_back(row.front());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "sweep row lambda=%s failed: %s\n",
                   format_double(coupling).c_str(), e.what());
      vanhove::SweepRow failed;
      failed.n_levels = cfg.model.n_levels;
      failed.coupling = coupling;
      failed.members = cfg.members;
      failed.rate = failed.rate_stderr = failed.equilibrium_p1 =
          failed.r_squared = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(failed);
    }
  }
  for (const auto& r : rows) {
    std::printf("N=%d lambda=%s S=%d rate=%s rate_stderr=%s "
                "equilibrium_p1=%s r_squared=%s\n",
                r.n_levels, format_double(r.coupling).c_str(), r.members,
                format_double(r.rate).c_str(),
                format_double(r.rate_stderr).c_str(),
                format_double(r.equilibrium_p1).c_str(),
                format_double(r.r_squared).c_str());
  }
  const json snapshot = config_snapshot(cfg, true);
  RunDirectory run = open_run_directory(out_flag, snapshot);
  write_output(run, "sweep.csv", sweep_csv(rows));
  write_manifest(run, "sweep", snapshot, cfg.master_seed);
}

void cmd_diagrams(int n, int m, const std::string& out_flag) {
  if (n < 0 || m < 0 || (n + m) % 2 != 0 || n + m < 2 || n + m > 16) {
    throw ConfigError("diagrams: n + m must be even and in [2, 16], got n=" +
                      std::to_string(n) + " m=" + std::to_string(m));
  }
  const auto counts = vanhove::count_by_class(n, m);
  const int k = (n + m) / 2;
  const std::uint64_t cat = vanhove::catalan(k);
  const std::uint64_t dfact = vanhove::double_factorial_odd(k);
  const bool match = counts.noncrossing() == cat && counts.total() == dfact;
  std::printf("n=%d m=%d simple=%llu nested=%llu noncrossing=%llu "
              "crossing=%llu total=%llu catalan=%llu doublefact=%llu "
              "match=%s\n",
              n, m, static_cast<unsigned long long>(counts.simple),
              static_cast<unsigned long long>(counts.nested),
              static_cast<unsigned long long>(counts.noncrossing()),
              static_cast<unsigned long long>(counts.crossing),
              static_cast<unsigned long long>(counts.total()),
              static_cast<unsigned long long>(cat),
              static_cast<unsigned long long>(dfact), match ? "true" : "false");
  if (!out_flag.empty()) {
    std::string csv =
        "n,m,simple,nested,noncrossing,crossing,total,catalan,match\n";
    csv += std::to_string(n) + "," + std::to_string(m) + "," +
           std::to_string(counts.simple) + "," + std::to_string(counts.nested) +
           "," + std::to_string(counts.noncrossing()) + "," +
           std::to_string(counts.crossing) + "," +
           std::to_string(counts.total()) + "," + std::to_string(cat) + "," +
           (match ? "true" : "false") + "\n";
    json snapshot;
    snapshot["n"] = n;
    snapshot["m"] = m;
    RunDirectory run = open_run_directory(out_flag, snapshot);
    write_output(run, "diagrams.csv", csv);
    write_manifest(run, "diagrams", snapshot, 0);
  }
}

void cmd_moments(int k, int n_levels, int samples, std::uint64_t seed,
                 const std::string& out_flag) {
  if (k < 1 || k > 6) {
    throw ConfigError("moments: k must be in [1, 6], got " + std::to_string(k));
  }
  if (n_levels < 2) throw ConfigError("moments: N must be >= 2");
  if (samples < 2) throw ConfigError("moments: S must be >= 2");
  const double formula = vanhove::moment_from_pairings(k, n_levels);
  const auto split = vanhove::moment_split(k, n_levels);
  const auto mc = vanhove::moment_monte_carlo(k, n_levels, samples, seed);
  const double z =
      mc.stderr > 0.0 ? (mc.mean - formula) / mc.stderr
                      : (mc.mean == formula ? 0.0
                                            : std::numeric_limits<double>::infinity());
  std::printf("k=%d N=%d S=%d formula=%s noncrossing=%s crossing=%s "
              "mc_mean=%s mc_stderr=%s z=%s\n",
              k, n_levels, samples, format_double(formula).c_str(),
              format_double(split.noncrossing).c_str(),
              format_double(split.crossing).c_str(),
              format_double(mc.mean).c_str(), format_double(mc.stderr).c_str(),
              format_double(z).c_str());
  if (!out_flag.empty()) {
    std::string csv =
        "k,N,S,formula,noncrossing,crossing,mc_mean,mc_stderr,z\n";
    csv += std::to_string(k) + "," + std::to_string(n_levels) + "," +
           std::to_string(samples) + "," + format_double(formula) + "," +
           format_double(split.noncrossing) + "," +
           format_double(split.crossing) + "," + format_double(mc.mean) + "," +
           format_double(mc.stderr) + "," + format_double(z) + "\n";
    json snapshot;
    snapshot["k"] = k;
    snapshot["N"] = n_levels;
    snapshot["S"] = samples;
    snapshot["master_seed"] = seed;
    RunDirectory run = open_run_directory(out_flag, snapshot);
    write_output(run, "moments.csv", csv);
    write_manifest(run, "moments", snapshot, seed);
  }
}

void cmd_effective(const std::string& out_flag) {
  const vanhove::Populations p0{1.0, 0.0};
  std::string csv = "T,p1_closed,p2_closed,p1_poisson,p2_poisson,abs_diff\n";
  double max_diff = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double T = 0.05 * i;
    const auto closed = vanhove::closed_form(T, p0);
    const auto series = vanhove::poisson_resum(T, p0);
    const double diff = std::abs(series.p1 - closed.p1);
    max_diff = std::max(max_diff, diff);
    csv += format_double(T) + "," + format_double(closed.p1) + "," +
           format_double(closed.p2) + "," + format_double(series.p1) + "," +
           format_double(series.p2) + "," + format_double(diff) + "\n";
  }
  double max_jump_dev = 0.0;
  for (int i = 1; i < 200; ++i) {
    const double omega = i / 200.0;
    max_jump_dev = std::max(
        max_jump_dev, std::abs(vanhove::theta_jump(omega) - 2.0 * vanhove::kPi));
  }
  std::printf("max|poisson - closed| = %s over T in [0, 1]\n",
              format_double(max_diff).c_str());
  std::printf("max|theta_jump - 2pi| = %s over the open band\n",
              format_double(max_jump_dev).c_str());
  if (!out_flag.empty()) {
    json snapshot;
    snapshot["t_max_scaled"] = 1.0;
    snapshot["points"] = 21;
    RunDirectory run = open_run_directory(out_flag, snapshot);
    write_output(run, "effective.csv", csv);
    write_manifest(run, "effective", snapshot, 0);
  }
}

void cmd_verify_bounds(int samples, std::uint64_t seed, int threads,
                       const std::string& out_flag) {
  if (samples < 1) throw ConfigError("verify-bounds: samples must be >= 1");
  const auto reports =
      vanhove::sweep_bounds(samples, seed, threads > 0 ? threads : 1);
  std::string csv = "inequality,constant,samples,max_ratio,violations\n";
  int total_violations = 0;
  for (const auto& r : reports) {
    std::printf("%s constant=%s samples=%d max_ratio=%s violations=%d\n",
                vanhove::inequality_name(r.inequality),
                format_double(r.constant).c_str(), r.samples,
                format_double(r.max_ratio).c_str(), r.violations);
    csv += std::string(vanhove::inequality_name(r.inequality)) + "," +
           format_double(r.constant) + "," + std::to_string(r.samples) + "," +
           format_double(r.max_ratio) + "," + std::to_string(r.violations) +
           "\n";
    total_violations += r.violations;
  }
  if (!out_flag.empty()) {
    json snapshot;
    snapshot["samples"] = samples;
    snapshot["master_seed"] = seed;
    RunDirectory run = open_run_directory(out_flag, snapshot);
    write_output(run, "bounds.csv", csv);
    write_manifest(run, "verify-bounds", snapshot, seed);
  }
  if (total_violations > 0) {
    throw std::runtime_error("bound violations detected: " +
                             std::to_string(total_violations));
  }
}

struct CommonArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = vanhove::kDefaultMasterSeed;
  int threads = 0;
  CLI::Option* seed_opt = nullptr;
};

void attach_common(CLI::App& sub, CommonArgs& a, bool config_required) {
  auto* c = sub.add_option("--config", a.config,
                           "JSON config file, or a previous manifest.json");
  if (config_required) c->required();
  sub.add_option("--out", a.out, "output directory (default: runs/<run_id>)");
  a.seed_opt = sub.add_option("--seed", a.seed, "master seed override");
  sub.add_option("--threads", a.threads, "worker threads (0 = config value)");
}

RunConfig resolve_run_config(const CommonArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) apply_config_file(cfg, a.config);
  if (a.seed_opt->count() > 0) cfg.master_seed = a.seed;
  if (a.threads > 0) cfg.threads = a.threads;
  validate_run_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-site random-matrix relaxation: ensemble simulator, "
               "pairing combinatorics, and integral-bound checks"};
  app.require_subcommand(1);

  CommonArgs sim_args, sweep_args, dia_args, mom_args, eff_args, bnd_args;
  int dia_n = 0, dia_m = 0;
  int mom_k = 1, mom_n = 32, mom_s = 500;
  int bnd_samples = 1000;

  auto* sim = app.add_subcommand("simulate", "ensemble relaxation trace");
  attach_common(*sim, sim_args, true);
  sim->callback([&] { cmd_simulate(resolve_run_config(sim_args), sim_args.out); });

  auto* swp = app.add_subcommand("sweep", "fitted rate per coupling strength");
  attach_common(*swp, sweep_args, true);
  swp->callback([&] { cmd_sweep(resolve_run_config(sweep_args), sweep_args.out); });

  auto* dia = app.add_subcommand("diagrams", "pairing class counts");
  dia->add_option("n", dia_n, "unprimed factors")->required();
  dia->add_option("m", dia_m, "primed factors")->required();
  attach_common(*dia, dia_args, false);
  dia->callback([&] { cmd_diagrams(dia_n, dia_m, dia_args.out); });

  auto* mom = app.add_subcommand("moments", "pairing formula vs Monte Carlo");
  mom->add_option("k", mom_k, "moment order (Tr V^2k)")->required();
  mom->add_option("N", mom_n, "levels per site")->required();
  mom->add_option("S", mom_s, "Monte Carlo samples")->required();
  attach_common(*mom, mom_args, false);
  mom->callback([&] {
    cmd_moments(mom_k, mom_n, mom_s, mom_args.seed, mom_args.out);
  });

  auto* eff = app.add_subcommand("effective", "closed form vs series solution");
  attach_common(*eff, eff_args, false);
  eff->callback([&] { cmd_effective(eff_args.out); });

  auto* bnd = app.add_subcommand("verify-bounds", "integral inequality sweep");
  bnd->add_option("samples", bnd_samples, "sweep samples per inequality");
  attach_common(*bnd, bnd_args, false);
  bnd->callback([&] {
    cmd_verify_bounds(bnd_samples, bnd_args.seed, bnd_args.threads,
                      bnd_args.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
