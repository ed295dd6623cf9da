#include "latstab_cli/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "latstab/error.hpp"

namespace latstab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw InvalidArgument(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw InvalidArgument(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + v + "'");
}

using Setter = std::function<void(const std::string&, const std::string&, RunConfig&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"d", [](auto& k, auto& v, RunConfig& c) { c.model.d = static_cast<int>(to_integer(k, v)); }},
      {"L", [](auto& k, auto& v, RunConfig& c) { c.model.L = static_cast<int>(to_integer(k, v)); }},
      {"a", [](auto& k, auto& v, RunConfig& c) { c.model.a = to_double(k, v); }},
      {"g2", [](auto& k, auto& v, RunConfig& c) { c.model.g2 = to_double(k, v); }},
      {"g0-sq", [](auto& k, auto& v, RunConfig& c) { c.model.g0_sq = to_double(k, v); }},
      {"kappa-u2", [](auto& k, auto& v, RunConfig& c) { c.model.kappa_u2 = to_double(k, v); }},
      {"m-u", [](auto& k, auto& v, RunConfig& c) { c.model.m_u = to_double(k, v); }},
      {"N", [](auto& k, auto& v, RunConfig& c) { c.model.N = static_cast<int>(to_integer(k, v)); }},
      {"n-f", [](auto& k, auto& v, RunConfig& c) { c.model.n_f = static_cast<int>(to_integer(k, v)); }},
      {"group", [](auto&, auto& v, RunConfig& c) { c.model.group = parse_group_kind(v); }},
      {"field", [](auto&, auto& v, RunConfig& c) { c.model.field = parse_field_kind(v); }},
      {"samples",
       [](auto& k, auto& v, RunConfig& c) {
         const long long n = to_integer(k, v);
         if (n < 1) throw InvalidArgument("samples must be >= 1");
         c.n_samples = static_cast<std::uint64_t>(n);
       }},
      {"seed", [](auto& k, auto& v, RunConfig& c) { c.seed = static_cast<std::uint64_t>(to_integer(k, v)); }},
      {"workers", [](auto& k, auto& v, RunConfig& c) { c.workers = static_cast<int>(to_integer(k, v)); }},
      {"nodes", [](auto& k, auto& v, RunConfig& c) { c.nodes = static_cast<int>(to_integer(k, v)); }},
      {"output", [](auto&, auto& v, RunConfig& c) { c.output = v; }},
      {"format",
       [](auto&, auto& v, RunConfig& c) {
         if (v == "json") c.format = OutputFormat::Json;
         else if (v == "csv") c.format = OutputFormat::Csv;
         else throw InvalidArgument("format must be json or csv, got '" + v + "'");
       }},
      {"theorem", [](auto&, auto& v, RunConfig& c) { c.theorem = v; }},
      {"variant", [](auto&, auto& v, RunConfig& c) { c.variant = v; }},
      {"action", [](auto&, auto& v, RunConfig& c) { c.action = v; }},
      {"gauge", [](auto&, auto& v, RunConfig& c) { c.gauge = v; }},
      {"task", [](auto&, auto& v, RunConfig& c) { c.task = v; }},
      {"gauge-fixed", [](auto& k, auto& v, RunConfig& c) { c.gauge_fixed = to_bool(k, v); }},
      {"configs", [](auto& k, auto& v, RunConfig& c) { c.n_configs = static_cast<int>(to_integer(k, v)); }},
      {"beta-grid", [](auto&, auto& v, RunConfig& c) { c.beta_grid = parse_double_list(v); }},
      {"a-grid", [](auto&, auto& v, RunConfig& c) { c.a_grid = parse_double_list(v); }},
      {"g2-grid", [](auto&, auto& v, RunConfig& c) { c.g2_grid = parse_double_list(v); }},
      {"L-grid", [](auto&, auto& v, RunConfig& c) { c.L_grid = parse_int_list(v); }},
      {"N-grid", [](auto&, auto& v, RunConfig& c) { c.N_grid = parse_int_list(v); }},
  };
  return table;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw InvalidArgument("empty list '" + text + "'");
  return out;
}

}  // namespace

OutputFormat RunConfig::effective_format() const {
  if (format) return *format;
  return (subcommand == "cue-gue" || subcommand == "d2-limit") ? OutputFormat::Csv : OutputFormat::Json;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_commas(text)) out.push_back(to_double("list", s));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& s : split_commas(text)) out.push_back(static_cast<int>(to_integer("list", s)));
  return out;
}

void apply_setting(const std::string& key, const std::string& value, RunConfig& cfg) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw InvalidArgument("unknown configuration key '" + key + "'");
  it->second(key, value, cfg);
}

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path.string() + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": malformed section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), cfg);
  }
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"d", p.d},         {"L", p.L},   {"a", p.a},     {"g2", p.g2},
          {"g0_sq", p.g0_sq}, {"kappa_u2", p.kappa_u2},     {"m_u", p.m_u},
          {"N", p.N},         {"n_f", p.n_f}, {"group", to_string(p.group)}, {"field", to_string(p.field)}};
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"subcommand", c.subcommand},
          {"model", to_json(c.model)},
          {"n_samples", c.n_samples},
          {"seed", c.seed},
          {"workers", c.workers},
          {"nodes", c.nodes},
          {"output", c.output},
          {"format", c.effective_format() == OutputFormat::Csv ? "csv" : "json"},
          {"theorem", c.theorem},
          {"variant", c.variant},
          {"action", c.action},
          {"gauge", c.gauge},
          {"task", c.task},
          {"gauge_fixed", c.gauge_fixed},
          {"n_configs", c.n_configs},
          {"beta_grid", c.beta_grid},
          {"a_grid", c.a_grid},
          {"g2_grid", c.g2_grid},
          {"L_grid", c.L_grid},
          {"N_grid", c.N_grid}};
}

}  // namespace latstab::cli
