#include "slabrt_cli/run_config.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <slabrt/errors.hpp>

namespace slabrt::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"profile", {"preset", "csv", "center", "width", "value"}},
      {"physics", {"mu", "g", "k0", "k1", "L"}},
      {"grid", {"n"}},
      {"band", {"a", "b"}},
      {"dispersion", {"n_samples"}},
      {"mode", {"xi"}},
      {"evolve", {"dt", "t_end", "epsilon", "init", "seed", "sample_every"}},
      {"escape", {"epsilon", "m0", "delta", "variant", "lambda"}},
      {"output", {"dir", "formats"}},
  };
  return keys;
}

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::InvalidInput, message); }

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) bad("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) bad("unknown config key " + section + "." + key);
    }
  }
}

template <class T>
T parse_value(const std::string& where, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) bad("cannot parse " + where + " = '" + text + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) bad(where + " must be finite");
  }
  return value;
}

template <class T>
void read(const pt::ptree& tree, const std::string& key, T& target) {
  if (auto v = tree.get_optional<std::string>(key)) target = parse_value<T>(key, *v);
}

template <class T>
void read(const pt::ptree& tree, const std::string& key, std::optional<T>& target) {
  if (auto v = tree.get_optional<std::string>(key)) target = parse_value<T>(key, *v);
}

void read(const pt::ptree& tree, const std::string& key, std::string& target) {
  if (auto v = tree.get_optional<std::string>(key)) target = *v;
}

}  // namespace

std::set<Format> parse_formats(const std::string& list) {
  std::set<Format> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "csv") {
      out.insert(Format::Csv);
    } else if (item == "json") {
      out.insert(Format::Json);
    } else if (item == "svg") {
      out.insert(Format::Svg);
    } else if (!item.empty()) {
      bad("unknown output format '" + item + "' (expected csv, json, svg)");
    }
  }
  if (out.empty()) bad("no output format selected");
  return out;
}

RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    bad("cannot read config: " + std::string(e.what()));
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      bad("override '" + o + "' is not section.key=value");
    }
    tree.put(pt::ptree::path_type(o.substr(0, eq), '.'), o.substr(eq + 1));
  }
  check_keys(tree);

  RunConfig c;
  const pt::ptree empty;
  auto section = [&](const char* name) -> const pt::ptree& {
    const auto child = tree.get_child_optional(name);
    return child ? *child : empty;
  };

  const auto& profile = section("profile");
  read(profile, "preset", c.profile.preset);
  read(profile, "center", c.profile.center);
  read(profile, "width", c.profile.width);
  read(profile, "value", c.profile.value);
  if (auto csv = profile.get_optional<std::string>("csv")) {
    std::filesystem::path p(*csv);
    if (p.is_relative()) p = path.parent_path() / p;
    c.profile.csv = p;
  }

  const auto& physics = section("physics");
  read(physics, "mu", c.slab.mu);
  read(physics, "g", c.slab.g);
  read(physics, "k0", c.slab.k0);
  read(physics, "k1", c.slab.k1);
  read(physics, "L", c.slab.L);

  read(section("grid"), "n", c.n);
  read(section("band"), "a", c.band_a);
  read(section("band"), "b", c.band_b);
  read(section("dispersion"), "n_samples", c.n_samples);
  read(section("mode"), "xi", c.xi);

  const auto& evolve = section("evolve");
  read(evolve, "dt", c.evolve.dt);
  read(evolve, "t_end", c.evolve.t_end);
  read(evolve, "epsilon", c.evolve.epsilon);
  read(evolve, "init", c.evolve.init);
  read(evolve, "seed", c.evolve.seed);
  read(evolve, "sample_every", c.evolve.sample_every);

  const auto& escape = section("escape");
  read(escape, "epsilon", c.escape.epsilon);
  read(escape, "m0", c.escape.m0);
  read(escape, "delta", c.escape.delta);
  read(escape, "variant", c.escape.variant);
  read(escape, "lambda", c.escape.lambda);

  const auto& output = section("output");
  if (auto dir = output.get_optional<std::string>("dir")) c.out_dir = *dir;
  if (auto formats = output.get_optional<std::string>("formats")) c.formats = parse_formats(*formats);

  c.validate();
  return c;
}

void RunConfig::validate() const {
  slab.validate();
  if (n < 16) throw Error(ErrorCode::GridTooSmall, "grid.n must be at least 16");
  if (n_samples < 2) bad("dispersion.n_samples must be at least 2");
  if (band_a && *band_a < 0.0) bad("band.a must be non-negative");
  if (band_a && band_b && !(*band_b > *band_a)) bad("band.b must exceed band.a");
  if (evolve.dt && !(*evolve.dt > 0.0)) bad("evolve.dt must be positive");
  if (evolve.t_end && !(*evolve.t_end > 0.0)) bad("evolve.t_end must be positive");
  if (evolve.sample_every < 1) bad("evolve.sample_every must be positive");
  static const std::set<std::string> inits{"auto", "mode", "random", "zero"};
  if (!inits.count(evolve.init)) bad("evolve.init must be auto, mode, random or zero");
  if (escape.variant != "A" && escape.variant != "B") bad("escape.variant must be A or B");
}

DensityProfile RunConfig::make_profile() const {
  if (profile.csv) return DensityProfile::from_csv(*profile.csv);
  if (profile.preset == "constant") return DensityProfile::constant(profile.value);
  return DensityProfile::preset(profile.preset, profile.center, profile.width);
}

}  // namespace slabrt::cli
