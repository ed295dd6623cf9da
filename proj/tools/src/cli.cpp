#include "latstab_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "latstab/bounds.hpp"
#include "latstab/error.hpp"
#include "latstab/haar_weyl.hpp"
#include "latstab/lattice.hpp"
#include "latstab/parallel.hpp"
#include "latstab/partition.hpp"
#include "latstab/rmt.hpp"
#include "latstab/su2.hpp"
#include "latstab_cli/config.hpp"

namespace latstab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// What a subcommand produces before formatting.
struct Output {
  json payload;
  std::vector<std::string> csv_header;
  std::vector<std::vector<json>> csv_rows;
  bool failed = false;
  std::string summary;
};

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return num17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

json estimate_json(const Estimate& e) {
  json j = {{"method", to_string(e.method)},
            {"log_value", e.log_value},
            {"log_std_error", e.log_std_error},
            {"n_samples", e.n_samples},
            {"seed", e.seed}};
  if (e.representable()) {
    j["value"] = e.value();
    j["std_error"] = e.std_error();
  }
  return j;
}

json report_json(const BoundReport& r) {
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  return {{"theorem", r.theorem}, {"verdict", to_string(r.verdict)},
          {"value", r.value},     {"std_error", r.std_error},
          {"lower", r.lower},     {"upper", r.upper},
          {"margin", r.margin},   {"samples", r.samples},
          {"violations", r.violations}, {"detail", r.detail},
          {"params", to_json(r.params)}, {"extras", extras}};
}

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_record(const RunConfig& cfg, const Output& o, double wall) {
  return {{"schema_version", kSchemaVersion}, {"timestamp", timestamp_utc()}, {"config", to_json(cfg)},
          {"payload", o.payload},             {"failed", o.failed},        {"wall_time_s", wall}};
}

// Writes through a temporary file so that a record exists only when complete.
void write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + tmp.string() + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move record into place at '" + path.string() + "': " + ec.message());
}

std::optional<fs::path> env_output_dir() {
  const char* v = std::getenv(kOutputDirEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return fs::path(v);
}

// ---------------------------------------------------------------- subcommands

Output cmd_lattice_info(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  const Lattice lat(p.d, p.L, p.a);
  const GaugeFixing fix = enhanced_temporal_gauge(lat);
  const TreeCheck tc = verify_gauge_fixing(lat, fix);
  Output o;
  o.payload = {{"d", p.d},
               {"L", p.L},
               {"a", p.a},
               {"sites", lat.num_sites()},
               {"bonds", lat.num_bonds()},
               {"plaquettes", lat.num_plaquettes()},
               {"retained", lat.num_retained()},
               {"retained_polynomial", retained_count_polynomial(p.d, p.L)},
               {"horizontal_plaquettes", lat.horizontal_plaquettes().size()},
               {"tree_bonds", fix.tree.size()},
               {"gauge_fixing", {{"spanning", tc.spanning}, {"acyclic", tc.acyclic}}}};
  o.csv_header = {"quantity", "value"};
  for (const char* k : {"sites", "bonds", "plaquettes", "retained", "horizontal_plaquettes", "tree_bonds"})
    o.csv_rows.push_back({k, o.payload[k]});
  o.failed = !tc.ok();
  o.summary = "d=" + std::to_string(p.d) + " L=" + std::to_string(p.L) + ": " + std::to_string(lat.num_sites()) +
              " sites, " + std::to_string(lat.num_bonds()) + " bonds, " + std::to_string(lat.num_plaquettes()) +
              " plaquettes, " + std::to_string(lat.num_retained()) + " retained";
  return o;
}

Output cmd_z_bond(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  const bool su2_group = p.group == GroupKind::SU && p.N == 2;
  std::vector<BondVariant> variants;
  if (cfg.variant == "all") variants = {BondVariant::Z, BondVariant::Z1, BondVariant::ZCheck};
  else if (cfg.variant == "z") variants = {BondVariant::Z};
  else if (cfg.variant == "z1") variants = {BondVariant::Z1};
  else if (cfg.variant == "z_check") variants = {BondVariant::ZCheck};
  else throw InvalidArgument("variant must be z, z1, z_check or all");
  if (p.group == GroupKind::SU && !su2_group && cfg.variant == "all") variants.pop_back();

  const double scale = std::pow(scaling_factors(p).s_y, lie_dimension(p.group, p.N));
  Output o;
  o.payload = {{"variants", json::array()}, {"scale", scale}};
  o.csv_header = {"variant", "value", "scaled"};
  for (BondVariant v : variants) {
    double z;
    if (su2_group && v == BondVariant::Z) z = su2::su2_z_weyl(p.a, p.g2, p.d);
    else if (su2_group && v == BondVariant::ZCheck) z = su2::su2_z_tilde(p.a, p.g2, p.d);
    else z = z_single_bond(p, v);
    o.payload["variants"].push_back({{"variant", to_string(v)}, {"value", z}, {"scaled", scale * z}});
    o.csv_rows.push_back({to_string(v), z, scale * z});
  }
  o.summary = "single-bond integrals for " + std::string(to_string(p.group)) + "(" + std::to_string(p.N) +
              "), a=" + num17(p.a) + ", g^2=" + num17(p.g2);
  return o;
}

Output cmd_bose_exact(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  auto lat = std::make_shared<const Lattice>(p.d, p.L, p.a);
  GaugeConfig g;
  if (cfg.gauge == "identity") {
    g = GaugeConfig::identity(lat, p.N);
  } else if (cfg.gauge == "random") {
    SampleStream rng(cfg.seed, 0);
    g = GaugeConfig::random(lat, p.group, p.N, rng);
  } else {
    throw InvalidArgument("gauge must be identity or random");
  }
  const Estimate scaled = z_bose_exact(g, p, true);
  const Estimate unscaled = z_bose_exact(g, p, false);
  const ScalingIdentityReport id = z_bose_scaling_identity(g, p);
  const QuadraticForm q = assemble_quadratic_form(g, p, true);
  Output o;
  o.payload = {{"gauge", cfg.gauge},
               {"z_b", estimate_json(scaled)},
               {"z_b_unscaled", estimate_json(unscaled)},
               {"scaling_identity", {{"log_factor", id.log_factor}, {"rel_error", id.rel_error}, {"pass", id.pass()}}},
               {"gershgorin_min", q.gershgorin_min},
               {"kappa2", scaling_factors(p).kappa2}};
  o.csv_header = {"quantity", "log_value"};
  o.csv_rows = {{"z_b", scaled.log_value}, {"z_b_unscaled", unscaled.log_value}, {"log_s_b_factor", id.log_factor}};
  o.failed = !id.pass();
  o.summary = "ln Z_B = " + num17(scaled.log_value) + " (" + cfg.gauge + " gauge field), scaling identity rel err " +
              num17(id.rel_error);
  return o;
}

Output cmd_wilson_mc(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  const Lattice lat(p.d, p.L, p.a);
  McOptions mc;
  mc.n_samples = cfg.n_samples;
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  mc.gauge_fixed = cfg.gauge_fixed;
  const Estimate e = z_wilson_mc(lat, p, mc);
  UnscaledInputs in;
  in.log_z_w = e.log_value;
  const ScaledPartition sp = assemble_scaled(p, lat, in);
  Output o;
  o.payload = {{"z_w", estimate_json(e)}, {"log_z_y", sp.log_z_y}, {"gauge_fixed", cfg.gauge_fixed}};
  o.csv_header = {"quantity", "log_value", "log_std_error"};
  o.csv_rows = {{"z_w", e.log_value, e.log_std_error}, {"z_y", sp.log_z_y, e.log_std_error}};
  if (p.d == 2 && (p.group == GroupKind::U || p.N == 2)) {
    const double z = p.group == GroupKind::SU ? su2::su2_z_weyl(p.a, p.g2, 2) : z_single_bond(p, BondVariant::Z);
    const double log_exact = lat.num_plaquettes() * std::log(z);
    o.payload["log_z_w_factorized"] = log_exact;
    o.csv_rows.push_back({"z_w_factorized", log_exact, 0.0});
  }
  o.summary = "ln Z^w = " + num17(e.log_value) + " +- " + num17(e.log_std_error) + " (" +
              std::to_string(e.n_samples) + " samples)";
  return o;
}

Output cmd_verify_bounds(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  std::vector<std::string> which;
  if (cfg.theorem == "all") which = {"1", "2", "3"};
  else which = {cfg.theorem};
  std::vector<BoundReport> reports;
  for (const auto& t : which) {
    if (t == "1") {
      Theorem1Options o;
      o.n_configs = cfg.n_configs;
      o.seed = cfg.seed;
      o.workers = cfg.workers;
      reports.push_back(verify_theorem1(p, o));
    } else if (t == "2") {
      Theorem2Options o;
      o.n_samples = cfg.n_samples;
      o.seed = cfg.seed;
      o.workers = cfg.workers;
      reports.push_back(verify_theorem2(p, o));
    } else if (t == "3") {
      Theorem3Options o;
      if (cfg.nodes > 0) o.nodes_per_axis = cfg.nodes;
      o.n_samples = cfg.n_samples;
      o.seed = cfg.seed;
      o.workers = cfg.workers;
      reports.push_back(verify_theorem3(p, o));
    } else if (t == "lemma") {
      LemmaOptions o;
      o.n_samples = cfg.n_samples;
      o.seed = cfg.seed;
      o.workers = cfg.workers;
      for (int k = 1; k <= 4; ++k) reports.push_back(verify_quadratic_lemma(p.group, p.N, k, o));
    } else if (t == "norms") {
      LemmaOptions o;
      o.n_samples = cfg.n_samples;
      o.seed = cfg.seed;
      o.workers = cfg.workers;
      reports.push_back(verify_norm_inequalities(p.N, o));
    } else {
      throw InvalidArgument("theorem must be 1, 2, 3, lemma, norms or all");
    }
  }
  Output o;
  o.payload = {{"reports", json::array()}};
  o.csv_header = {"theorem", "verdict", "value", "std_error", "lower", "upper", "margin"};
  int fails = 0, inconclusive = 0;
  for (const auto& r : reports) {
    o.payload["reports"].push_back(report_json(r));
    o.csv_rows.push_back({r.theorem, to_string(r.verdict), r.value, r.std_error, r.lower, r.upper, r.margin});
    if (r.verdict == Verdict::Fail) ++fails;
    if (r.verdict == Verdict::Inconclusive) ++inconclusive;
  }
  o.failed = fails > 0;
  o.summary = std::to_string(reports.size()) + " report(s): " + std::to_string(fails) + " fail, " +
              std::to_string(inconclusive) + " inconclusive";
  return o;
}

Output sweep_output(const LimitSweep& s, const std::string& column) {
  Output o;
  o.payload = {{"N", s.N}, {"variable", s.variable}, {"target", s.target}, {"rate", s.rate}, {"points", json::array()}};
  o.csv_header = {column, "value", "target", "abs_err"};
  for (const auto& p : s.points) {
    o.payload["points"].push_back({{column, p.x}, {"value", p.value}, {"target", p.target}, {"abs_err", p.abs_err}});
    o.csv_rows.push_back({p.x, p.value, p.target, p.abs_err});
  }
  if (!s.points.empty())
    o.summary = "N=" + std::to_string(s.N) + ": value " + num17(s.points.back().value) + " at " + column + "=" +
                num17(s.points.back().x) + ", target " + num17(s.target);
  return o;
}

Output cmd_cue_gue(const RunConfig& cfg) {
  ActionChoice choice;
  if (cfg.action == "wilson") choice = ActionChoice::Wilson;
  else if (cfg.action == "quadratic") choice = ActionChoice::ExactQuadratic;
  else throw InvalidArgument("action must be wilson or quadratic");
  for (double b : cfg.beta_grid)
    if (!(b > 0.0)) throw InvalidArgument("beta-grid entries must be positive");
  return sweep_output(cue_gue_limit(cfg.model.N, cfg.beta_grid, choice), "beta");
}

Output cmd_d2_limit(const RunConfig& cfg) {
  return sweep_output(d2_free_energy(cfg.model.N, cfg.a_grid, cfg.model.g2), "a");
}

Output cmd_su2_check(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  const su2::BoundsCheck b = su2::su2_bounds_check(p.a, p.g2, p.d, p.L, p.g0_sq);
  const double zg = su2::su2_z_gluon(p.a, p.g2, p.d);
  const double rel = std::abs(zg - b.z) / b.z;
  Output o;
  o.payload = {{"z_gluon", zg},
               {"z_weyl", b.z},
               {"gluon_weyl_rel_diff", rel},
               {"scaled_z", b.scaled_z},
               {"z_tilde", b.z_tilde},
               {"scaled_z_tilde", b.scaled_z_tilde},
               {"upper_constant", b.upper_constant},
               {"lower_constant", b.lower_constant},
               {"upper_ok", b.upper_ok},
               {"lower_ok", b.lower_ok}};
  o.csv_header = {"quantity", "value"};
  for (const char* k : {"z_gluon", "z_weyl", "scaled_z", "z_tilde", "scaled_z_tilde", "upper_constant", "lower_constant"})
    o.csv_rows.push_back({k, o.payload[k]});
  o.failed = !b.pass() || rel > 1e-9;
  o.summary = std::string("SU(2) single bond: ") + (o.failed ? "FAIL" : "pass") + ", gluon/Weyl rel diff " + num17(rel);
  return o;
}

Output dispatch(const RunConfig& cfg);

std::string point_name(const RunConfig& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s-N%d-L%d-a%.6g-g2%.6g.json", c.subcommand.c_str(), c.model.N, c.model.L,
                c.model.a, c.model.g2);
  return buf;
}

Output cmd_sweep(const RunConfig& cfg) {
  if (cfg.task != "z-bond" && cfg.task != "verify-bounds") throw InvalidArgument("task must be z-bond or verify-bounds");
  fs::path dir;
  if (!cfg.output.empty()) dir = cfg.output;
  else if (auto env = env_output_dir()) dir = *env;
  else dir = "latstab-sweep";

  const std::vector<int> Ns = cfg.N_grid.empty() ? std::vector<int>{cfg.model.N} : cfg.N_grid;
  const std::vector<int> Ls = cfg.L_grid.empty() ? std::vector<int>{cfg.model.L} : cfg.L_grid;
  const std::vector<double> gs = cfg.g2_grid.empty() ? std::vector<double>{cfg.model.g2} : cfg.g2_grid;

  std::vector<RunConfig> points;
  for (int N : Ns)
    for (int L : Ls)
      for (double a : cfg.a_grid)
        for (double g2 : gs) {
          RunConfig c = cfg;
          c.subcommand = cfg.task;
          c.model.N = N;
          c.model.L = L;
          c.model.a = a;
          c.model.g2 = g2;
          c.model.validate();
          c.output.clear();
          c.workers = 1;
          points.push_back(c);
        }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!fs::exists(dir / point_name(points[i]))) todo.push_back(i);

  struct PointResult {
    std::string text;
    bool failed = false;
  };
  const auto results = parallel_map<PointResult>(todo.size(), cfg.workers, [&](std::size_t j) {
    const RunConfig& c = points[todo[j]];
    const auto t0 = std::chrono::steady_clock::now();
    const Output out = dispatch(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return PointResult{make_record(c, out, wall).dump(2) + "\n", out.failed};
  });
  int fails = 0;
  for (std::size_t j = 0; j < todo.size(); ++j) {
    write_file(dir / point_name(points[todo[j]]), results[j].text);
    if (results[j].failed) ++fails;
  }

  Output o;
  o.payload = {{"directory", dir.string()},
               {"points", points.size()},
               {"computed", todo.size()},
               {"skipped", points.size() - todo.size()},
               {"failed", fails}};
  o.csv_header = {"points", "computed", "skipped", "failed"};
  o.csv_rows = {{points.size(), todo.size(), points.size() - todo.size(), fails}};
  o.failed = fails > 0;
  o.summary = "sweep: " + std::to_string(points.size()) + " points, " + std::to_string(todo.size()) + " computed, " +
              std::to_string(points.size() - todo.size()) + " already present in " + dir.string();
  return o;
}

Output dispatch(const RunConfig& cfg) {
  const std::string& s = cfg.subcommand;
  if (s == "lattice-info") return cmd_lattice_info(cfg);
  if (s == "z-bond") return cmd_z_bond(cfg);
  if (s == "bose-exact") return cmd_bose_exact(cfg);
  if (s == "wilson-mc") return cmd_wilson_mc(cfg);
  if (s == "verify-bounds") return cmd_verify_bounds(cfg);
  if (s == "cue-gue") return cmd_cue_gue(cfg);
  if (s == "d2-limit") return cmd_d2_limit(cfg);
  if (s == "su2-check") return cmd_su2_check(cfg);
  if (s == "sweep") return cmd_sweep(cfg);
  throw InvalidArgument("unknown subcommand '" + s + "'");
}

// ---------------------------------------------------------------- parsing

struct SubcommandInfo {
  const char* name;
  const char* help;
  std::vector<const char*> extra;  // keys beyond the common set
};

const std::vector<SubcommandInfo>& subcommand_table() {
  static const std::vector<SubcommandInfo> table = {
      {"lattice-info", "Lattice counts and gauge-fixing check as JSON", {}},
      {"z-bond", "Single-bond integrals z, z1, z_check", {"variant"}},
      {"bose-exact", "Exact field partition function at one gauge configuration", {"gauge"}},
      {"wilson-mc", "Pure-gauge partition function by Haar Monte Carlo", {"gauge-fixed"}},
      {"verify-bounds", "Check the partition-function bounds; JSON report array", {"theorem", "configs"}},
      {"cue-gue", "Small-beta limit of the single-bond integral (CSV)", {"beta-grid", "action"}},
      {"d2-limit", "d=2 free energy as a -> 0 (CSV)", {"a-grid"}},
      {"su2-check", "SU(2) single-bond integral and its bounds", {}},
      {"sweep", "Resumable grid over (a, g^2, L, N); one record file per point",
       {"task", "a-grid", "g2-grid", "L-grid", "N-grid", "theorem", "variant", "configs"}},
  };
  return table;
}

const std::vector<const char*>& common_keys() {
  static const std::vector<const char*> keys = {"d",       "L",    "a",     "g2",   "g0-sq",  "kappa-u2",
                                                "m-u",     "N",    "n-f",   "group", "field", "samples",
                                                "seed",    "workers", "nodes", "output", "format"};
  return keys;
}

const char* option_help(const std::string& key) {
  static const std::map<std::string, const char*> help = {
      {"d", "Dimension, 2..4 [2]"},
      {"L", "Sites per side, >= 2 [2]"},
      {"a", "Lattice spacing in (0, 1] [1]"},
      {"g2", "Coupling g^2 > 0 [1]"},
      {"g0-sq", "Coupling ceiling g0^2 [4]"},
      {"kappa-u2", "Hopping parameter kappa_u^2 >= 0 [1]"},
      {"m-u", "Mass parameter m_u >= 0 [0]"},
      {"N", "Group rank [1]"},
      {"n-f", "Flavours [1]"},
      {"group", "U or SU [U]"},
      {"field", "real or complex [complex]"},
      {"samples", "Monte Carlo sample count [100000]"},
      {"seed", "Master seed [1]"},
      {"workers", "Worker threads; results do not depend on it [1]"},
      {"nodes", "Quadrature nodes per axis, 0 = automatic [0]"},
      {"output", "Record file (sweep: directory)"},
      {"format", "json or csv"},
      {"variant", "z, z1, z_check or all [all]"},
      {"gauge", "random or identity bond configuration [random]"},
      {"theorem", "1, 2, 3, lemma, norms or all [all = 1,2,3]"},
      {"configs", "Gauge configurations sampled per check [100]"},
      {"beta-grid", "Comma-separated beta values [0.1,0.01,0.001,0.0001]"},
      {"action", "wilson or quadratic [wilson]"},
      {"a-grid", "Comma-separated spacings [0.1,0.01,0.001]"},
      {"g2-grid", "Comma-separated couplings [--g2]"},
      {"L-grid", "Comma-separated sizes [--L]"},
      {"N-grid", "Comma-separated ranks [--N]"},
      {"task", "z-bond or verify-bounds [z-bond]"},
  };
  const auto it = help.find(key);
  return it == help.end() ? "" : it->second;
}

// Finds --config FILE or --config=FILE anywhere on the line.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"latstab: lattice stability bounds toolkit", "latstab"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value config file; flags override it");

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, bool> gauge_fixed_flag;
  for (const auto& info : subcommand_table()) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    sub->add_option("--config", config_path, "Flat key = value config file; flags override it");
    auto& values = raw[info.name];
    for (const char* key : common_keys()) sub->add_option(std::string("--") + key, values[key], option_help(key));
    for (const char* key : info.extra) {
      if (std::string(key) == "gauge-fixed") sub->add_flag("--gauge-fixed", gauge_fixed_flag[info.name], "Integrate retained bonds only");
      else sub->add_option(std::string("--") + key, values[key], option_help(key));
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  cfg.subcommand = sub->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  Output result;
  try {
    if (auto path = find_config(args)) apply_config_file(*path, cfg);
    for (const auto& [key, value] : raw[cfg.subcommand])
      if (sub->count("--" + key) > 0) apply_setting(key, value, cfg);
    if (gauge_fixed_flag[cfg.subcommand]) cfg.gauge_fixed = true;
    if (cfg.workers < 1) throw InvalidArgument("workers must be >= 1");
    if (cfg.nodes < 0) throw InvalidArgument("nodes must be >= 0");
    if (cfg.subcommand != "cue-gue" && cfg.subcommand != "d2-limit") cfg.model.validate();
    result = dispatch(cfg);
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const QuadratureError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (cfg.effective_format() == OutputFormat::Csv) {
    for (std::size_t i = 0; i < result.csv_header.size(); ++i) out << (i ? "," : "") << result.csv_header[i];
    out << "\n";
    for (const auto& row : result.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << "\n";
    }
  } else if (cfg.subcommand == "verify-bounds") {
    out << result.payload["reports"].dump(2) << "\n";
  } else {
    out << result.payload.dump(2) << "\n";
  }
  err << result.summary << "\n";

  if (cfg.subcommand != "sweep") {
    std::optional<fs::path> target;
    if (!cfg.output.empty()) target = fs::path(cfg.output);
    else if (auto env = env_output_dir()) target = *env / (cfg.subcommand + ".json");
    if (target) {
      try {
        write_file(*target, make_record(cfg, result, wall).dump(2) + "\n");
      } catch (const IoError& e) {
        err << "output error: " << e.what() << "\n";
        return kExitNumeric;
      }
    }
  }
  return result.failed ? kExitFail : kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace latstab::cli
