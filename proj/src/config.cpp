#include "wafm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace wafm {

namespace pt = boost::property_tree;

const std::vector<std::string>& check_groups() {
  static const std::vector<std::string> groups = {
      "transforms", "oracles", "gaussian-domination", "infrared-bound", "dls",
      "sum-rule",   "peierls", "correlator-bound",    "integrals",      "lro-region",
  };
  return groups;
}

namespace {

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  try {
    return boost::lexical_cast<T>(boost::trim_copy(text));
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("cannot parse value of '" + key + "': '" + text + "'");
  }
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  const std::string trimmed = boost::trim_copy(text);
  if (trimmed.empty()) return out;
  std::vector<std::string> parts;
  boost::split(parts, trimmed, boost::is_any_of(","));
  for (const auto& p : parts) out.push_back(parse_value<T>(key, p));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <class T>
Setter scalar(T RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_value<T>(k, v); };
}

template <class T>
Setter list(std::vector<T> RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_list<T>(k, v); };
}

Setter model(double ModelParams::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.model.*field = parse_value<double>(k, v);
  };
}

Setter tolerance(double Tolerances::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.tol.*field = parse_value<double>(k, v);
  };
}

Setter optional(std::optional<double> RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_value<double>(k, v); };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"lattice", {{"d", scalar(&RunConfig::d)}, {"half_sides", list(&RunConfig::half_sides)}}},
      {"model",
       {{"t", model(&ModelParams::t)},
        {"J", model(&ModelParams::J)},
        {"B", model(&ModelParams::B)},
        {"beta", model(&ModelParams::beta)}}},
      {"thermal",
       {{"betas", list(&RunConfig::betas)},
        {"fields_B", list(&RunConfig::fields_B)},
        {"chain_betas", list(&RunConfig::chain_betas)},
        {"draws", scalar(&RunConfig::draws)},
        {"field_range", scalar(&RunConfig::field_range)},
        {"seed", scalar(&RunConfig::seed)}}},
      {"transforms",
       {{"t", scalar(&RunConfig::transform_t)},
        {"J", scalar(&RunConfig::transform_J)},
        {"B", scalar(&RunConfig::transform_B)},
        {"field_amplitude", scalar(&RunConfig::field_amplitude)}}},
      {"small",
       {{"peierls_families", scalar(&RunConfig::peierls_families)},
        {"quadrature_pairs", scalar(&RunConfig::quadrature_pairs)}}},
      {"integrals",
       {{"sides", list(&RunConfig::grid_sides)}, {"requested_error", scalar(&RunConfig::requested_error)}}},
      {"region",
       {{"t_max", scalar(&RunConfig::region_t_max)},
        {"t_points", scalar(&RunConfig::region_t_points)},
        {"beta_min", scalar(&RunConfig::region_beta_min)},
        {"beta_max", scalar(&RunConfig::region_beta_max)},
        {"beta_points", scalar(&RunConfig::region_beta_points)}}},
      {"certificate",
       {{"C1", optional(&RunConfig::C1)},
        {"C2", optional(&RunConfig::C2)},
        {"I", optional(&RunConfig::I)},
        {"J", optional(&RunConfig::J)},
        {"K", optional(&RunConfig::K)}}},
      {"tolerances",
       {{"scale", tolerance(&Tolerances::scale)},
        {"identity", tolerance(&Tolerances::identity)},
        {"local", tolerance(&Tolerances::local)},
        {"thermal", tolerance(&Tolerances::thermal)},
        {"dls", tolerance(&Tolerances::dls)},
        {"chain", tolerance(&Tolerances::chain)},
        {"quadrature", tolerance(&Tolerances::quadrature)}}},
      {"run",
       {{"checks",
         [](RunConfig& c, const std::string& k, const std::string& v) {
           c.checks = parse_list<std::string>(k, v);
         }}}},
  };
  return s;
}

RunConfig from_tree(const pt::ptree& tree) {
  RunConfig c;
  const auto& s = schema();
  for (const auto& [section, body] : tree) {
    const auto sec = s.find(section);
    if (sec == s.end()) {
      if (!body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      const auto set = sec->second.find(key);
      if (set == sec->second.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      set->second(c, section + "." + key, node.data());
    }
  }
  validate(c);
  return c;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool positive_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
}

}  // namespace

void validate(const RunConfig& c) {
  require(c.d >= 1 && c.d <= 3, "lattice.d must be 1, 2 or 3");
  require(static_cast<int>(c.half_sides.size()) == c.d, "lattice.half_sides needs exactly d entries");
  require(std::all_of(c.half_sides.begin(), c.half_sides.end(), [](int h) { return h >= 1; }),
          "lattice.half_sides must be positive");
  require(c.model.J > 0.0 && std::isfinite(c.model.J), "model.J must be positive");
  require(c.model.beta > 0.0 && std::isfinite(c.model.beta), "model.beta must be positive");
  require(std::isfinite(c.model.t) && std::isfinite(c.model.B), "model.t and model.B must be finite");
  require(positive_all(c.betas) && positive_all(c.chain_betas), "inverse temperatures must be positive");
  require(std::all_of(c.fields_B.begin(), c.fields_B.end(), [](double b) { return std::isfinite(b); }),
          "thermal.fields_B must be finite");
  require(c.draws >= 0, "thermal.draws must be nonnegative");
  require(c.field_range > 0.0, "thermal.field_range must be positive");
  require(c.transform_J > 0.0, "transforms.J must be positive");
  require(c.peierls_families >= 1 && c.quadrature_pairs >= 1, "small lattice sample counts must be positive");
  require(c.grid_sides.size() >= 3, "integrals.sides needs at least three levels");
  for (std::size_t k = 0; k < c.grid_sides.size(); ++k) {
    require(c.grid_sides[k] >= 2 && c.grid_sides[k] % 2 == 0, "integrals.sides must be even");
    if (k) require(c.grid_sides[k] == 2 * c.grid_sides[k - 1], "integrals.sides must double at each level");
  }
  require(c.requested_error > 0.0, "integrals.requested_error must be positive");
  require(c.region_t_max >= 0.0 && c.region_t_points >= 2 && c.region_beta_points >= 2,
          "region grid needs a nonnegative t range and two points per axis");
  require(c.region_beta_min > 0.0 && c.region_beta_max > c.region_beta_min, "region beta range is empty");
  for (const auto* v : {&c.C1, &c.C2, &c.I, &c.J, &c.K})
    require(!v->has_value() || (std::isfinite(**v) && **v >= 0.0), "certificate constants must be nonnegative");
  for (double t : {c.tol.scale, c.tol.identity, c.tol.local, c.tol.thermal, c.tol.dls, c.tol.chain,
                   c.tol.quadrature})
    require(t >= 0.0 && std::isfinite(t), "tolerances must be finite and nonnegative");
  const auto& groups = check_groups();
  for (const auto& g : c.checks)
    require(std::find(groups.begin(), groups.end(), g) != groups.end(), "unknown check group '" + g + "'");
}

RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  return from_tree(tree);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  auto opt = [&](const char* k, const std::optional<double>& v) {
    if (v) os << k << " = " << *v << '\n';
  };
  os << "[lattice]\nd = " << c.d << "\nhalf_sides = " << join(c.half_sides) << "\n\n";
  os << "[model]\nt = " << c.model.t << "\nJ = " << c.model.J << "\nB = " << c.model.B << "\nbeta = " << c.model.beta
     << "\n\n";
  os << "[thermal]\nbetas = " << join(c.betas) << "\nfields_B = " << join(c.fields_B)
     << "\nchain_betas = " << join(c.chain_betas) << "\ndraws = " << c.draws << "\nfield_range = " << c.field_range
     << "\nseed = " << c.seed << "\n\n";
  os << "[transforms]\nt = " << c.transform_t << "\nJ = " << c.transform_J << "\nB = " << c.transform_B
     << "\nfield_amplitude = " << c.field_amplitude << "\n\n";
  os << "[small]\npeierls_families = " << c.peierls_families
     << "\nquadrature_pairs = " << c.quadrature_pairs << "\n\n";
  os << "[integrals]\nsides = " << join(c.grid_sides) << "\nrequested_error = " << c.requested_error << "\n\n";
  os << "[region]\nt_max = " << c.region_t_max << "\nt_points = " << c.region_t_points
     << "\nbeta_min = " << c.region_beta_min << "\nbeta_max = " << c.region_beta_max
     << "\nbeta_points = " << c.region_beta_points << "\n\n";
  os << "[certificate]\n";
  opt("C1", c.C1);
  opt("C2", c.C2);
  opt("I", c.I);
  opt("J", c.J);
  opt("K", c.K);
  os << "\n[tolerances]\nscale = " << c.tol.scale << "\nidentity = " << c.tol.identity << "\nlocal = " << c.tol.local
     << "\nthermal = " << c.tol.thermal << "\ndls = " << c.tol.dls << "\nchain = " << c.tol.chain
     << "\nquadrature = " << c.tol.quadrature << "\n\n";
  os << "[run]\nchecks = " << join(c.checks) << '\n';
  return os.str();
}

}  // namespace wafm
