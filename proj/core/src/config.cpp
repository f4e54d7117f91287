#include "cdlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "cdlab/errors.hpp"

namespace cdlab {

namespace pt = boost::property_tree;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == s.npos ? s.npos : at - start)));
    if (at == s.npos) break;
    start = at + 1;
  }
  return out;
}

double to_double(std::string_view s, std::string_view key) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, s));
  }
  return v;
}

std::uint64_t to_u64(std::string_view s, std::string_view key) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a nonnegative integer", key, s));
  }
  return v;
}

cplx to_complex(std::string_view s, std::string_view key) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {to_double(parts[0], key), 0.0};
  if (parts.size() == 2) return {to_double(parts[0], key), to_double(parts[1], key)};
  throw ConfigError(fmt::format("{}: expected 're,im', got '{}'", key, s));
}

// "name(args)" -> {name, args}; args empty when there are no parentheses
std::pair<std::string_view, std::optional<std::string_view>> call_form(std::string_view s) {
  s = trim(s);
  const auto open = s.find('(');
  if (open == s.npos) return {s, std::nullopt};
  if (s.back() != ')') throw ConfigError(fmt::format("unbalanced parentheses in '{}'", s));
  return {trim(s.substr(0, open)), s.substr(open + 1, s.size() - open - 2)};
}

const std::set<std::string> kMeasureKeys{"kind", "m", "radius", "path", "atoms"};
const std::set<std::string> kWeightKeys{"phi"};
const std::set<std::string> kRunKeys{"k",      "delta",   "eps",    "y0",     "probe_radius",
                                     "probe_rings", "probe_angles", "f", "g", "p",
                                     "moments", "trials", "anchor", "nevai_radius", "seed"};

void check_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!allowed.contains(key)) throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, name));
  }
}

} // namespace

SymbolFunction parse_symbol(const std::string& text) {
  const auto [name, args] = call_form(text);
  if (name == "re_z" && !args) return SymbolFunction::re_z();
  if (name == "z" && !args) return SymbolFunction::z();
  if (name == "const" && args) return SymbolFunction::constant(to_double(*args, "const"));
  if (name == "rational" && args) {
    const auto halves = split(*args, ';');
    if (halves.size() != 2) throw ConfigError("rational: expected 'a0,a1,...;b0,b1,...'");
    auto coeffs = [](std::string_view list) {
      std::vector<cplx> c;
      for (auto item : split(list, ',')) c.emplace_back(to_double(item, "rational"), 0.0);
      return c;
    };
    try {
      return SymbolFunction::rational(coeffs(halves[0]), coeffs(halves[1]));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError(fmt::format("unknown symbol '{}' (const(c) | re_z | z | rational(..;..))", text));
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
  }

  ExperimentConfig cfg;
  cfg.source = text;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(fmt::format("key '{}' outside any section", section));
    }
    if (section != "measure" && section != "weight" && section != "run") {
      throw ConfigError(fmt::format("unknown section [{}]", section));
    }
  }

  if (const auto m = tree.get_child_optional("measure")) {
    check_keys(*m, "measure", kMeasureKeys);
    const std::string kind = m->get<std::string>("kind", "circle");
    if (kind == "circle") cfg.measure.kind = MeasureSpec::Kind::circle;
    else if (kind == "chebyshev") cfg.measure.kind = MeasureSpec::Kind::chebyshev;
    else if (kind == "uniform") cfg.measure.kind = MeasureSpec::Kind::uniform;
    else if (kind == "file") cfg.measure.kind = MeasureSpec::Kind::file;
    else throw ConfigError(fmt::format("measure.kind: unknown generator '{}'", kind));

    if (auto v = m->get_optional<std::string>("m")) cfg.measure.m = to_u64(*v, "measure.m");
    if (auto v = m->get_optional<std::string>("radius")) cfg.measure.radius = to_double(*v, "measure.radius");
    if (auto v = m->get_optional<std::string>("path")) {
      std::filesystem::path p(std::string(trim(*v)));
      cfg.measure.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (auto v = m->get_optional<std::string>("atoms")) {
      for (auto triple : split(*v, ';')) {
        if (triple.empty()) continue;
        const auto f = split(triple, ',');
        if (f.size() != 3) throw ConfigError(fmt::format("measure.atoms: expected 're,im,w', got '{}'", triple));
        cfg.measure.atoms.emplace_back(cplx{to_double(f[0], "atoms"), to_double(f[1], "atoms")},
                                       to_double(f[2], "atoms"));
      }
    }
  }

  if (const auto w = tree.get_child_optional("weight")) {
    check_keys(*w, "weight", kWeightKeys);
    const auto [name, args] = call_form(w->get<std::string>("phi", "zero"));
    if (name == "zero" && !args) cfg.weight.kind = WeightSpec::Kind::zero;
    else if (name == "samples" && !args) cfg.weight.kind = WeightSpec::Kind::samples;
    else if (name == "gaussian" && args) {
      cfg.weight.kind = WeightSpec::Kind::gaussian;
      cfg.weight.c = to_double(*args, "weight.phi");
    } else {
      throw ConfigError("weight.phi: expected zero | gaussian(c) | samples");
    }
  }

  if (const auto r = tree.get_child_optional("run")) {
    check_keys(*r, "run", kRunKeys);
    if (auto v = r->get_optional<std::string>("k")) {
      for (auto item : split(*v, ',')) cfg.k_list.push_back(to_u64(item, "run.k"));
    }
    if (auto v = r->get_optional<std::string>("delta")) cfg.delta = to_double(*v, "run.delta");
    if (auto v = r->get_optional<std::string>("eps")) cfg.eps = to_double(*v, "run.eps");
    if (auto v = r->get_optional<std::string>("y0")) cfg.y0 = to_complex(*v, "run.y0");
    if (auto v = r->get_optional<std::string>("probe_radius")) cfg.probe.radius = to_double(*v, "run.probe_radius");
    if (auto v = r->get_optional<std::string>("probe_rings")) cfg.probe.rings = to_u64(*v, "run.probe_rings");
    if (auto v = r->get_optional<std::string>("probe_angles")) cfg.probe.angles = to_u64(*v, "run.probe_angles");
    if (auto v = r->get_optional<std::string>("f")) cfg.f = std::string(trim(*v));
    if (auto v = r->get_optional<std::string>("g")) cfg.g = std::string(trim(*v));
    if (auto v = r->get_optional<std::string>("p")) {
      cfg.p_list.clear();
      for (auto item : split(*v, ',')) cfg.p_list.push_back(to_double(item, "run.p"));
    }
    if (auto v = r->get_optional<std::string>("moments")) cfg.moments = to_u64(*v, "run.moments");
    if (auto v = r->get_optional<std::string>("trials")) cfg.trials = to_u64(*v, "run.trials");
    if (auto v = r->get_optional<std::string>("anchor")) cfg.anchor = to_complex(*v, "run.anchor");
    if (auto v = r->get_optional<std::string>("nevai_radius")) cfg.nevai_radius = to_double(*v, "run.nevai_radius");
    if (auto v = r->get_optional<std::string>("seed")) cfg.seed = to_u64(*v, "run.seed");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.k_list.empty()) throw ConfigError("run.k: the k list is empty");
  if (cfg.k_list.front() == 0) throw ConfigError("run.k: k must be positive");
  if (!std::is_sorted(cfg.k_list.begin(), cfg.k_list.end()) ||
      std::adjacent_find(cfg.k_list.begin(), cfg.k_list.end()) != cfg.k_list.end()) {
    throw ConfigError("run.k: values must be strictly ascending");
  }
  if (cfg.measure.kind == MeasureSpec::Kind::file) {
    if (cfg.measure.path.empty()) throw ConfigError("measure.path is required for kind = file");
    if (!std::filesystem::exists(cfg.measure.path)) {
      throw ConfigError(fmt::format("measure file '{}' does not exist", cfg.measure.path.string()));
    }
  } else if (cfg.measure.m == 0) {
    throw ConfigError("measure.m must be positive");
  }
  if (cfg.weight.kind == WeightSpec::Kind::samples && cfg.measure.kind != MeasureSpec::Kind::file) {
    throw ConfigError("weight.phi = samples needs a measure file");
  }
  if (!(cfg.measure.radius > 0.0)) throw ConfigError("measure.radius must be positive");
  for (const auto& [z, w] : cfg.measure.atoms)
    if (!(w > 0.0)) throw ConfigError("measure.atoms: weights must be positive");
  if (!(cfg.delta > 0.0)) throw ConfigError("run.delta must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ConfigError("run.eps must lie in (0, 1)");
  if (!(cfg.probe.radius > 0.0) || cfg.probe.rings == 0 || cfg.probe.angles == 0) {
    throw ConfigError("run.probe_*: empty probe grid");
  }
  for (double p : cfg.p_list)
    if (!(p >= 1.0)) throw ConfigError(fmt::format("run.p: {} < 1", p));
  if (cfg.moments < 2) throw ConfigError("run.moments must be at least 2");
  if (!(cfg.nevai_radius > 0.0)) throw ConfigError("run.nevai_radius must be positive");
  parse_symbol(cfg.f);
  parse_symbol(cfg.g);
}

DiscreteMeasure build_measure(const MeasureSpec& spec) {
  auto base = [&]() -> DiscreteMeasure {
    switch (spec.kind) {
    case MeasureSpec::Kind::circle: return gen_circle(spec.m, spec.radius);
    case MeasureSpec::Kind::chebyshev: return gen_interval(spec.m, IntervalRule::chebyshev);
    case MeasureSpec::Kind::uniform: return gen_interval(spec.m, IntervalRule::uniform);
    case MeasureSpec::Kind::file: return load_measure(spec.path).measure;
    }
    throw ConfigError("unreachable measure kind");
  }();
  if (spec.atoms.empty()) return base;
  std::vector<cplx> nodes;
  std::vector<double> weights;
  for (const auto& [z, w] : spec.atoms) {
    nodes.push_back(z);
    weights.push_back(w);
  }
  return add_atoms(base, nodes, weights);
}

std::pair<DiscreteMeasure, MetricWeight> build_measure_and_weight(const ExperimentConfig& cfg) {
  DiscreteMeasure mu = build_measure(cfg.measure);
  switch (cfg.weight.kind) {
  case WeightSpec::Kind::zero: return {std::move(mu), MetricWeight::zero()};
  case WeightSpec::Kind::gaussian: return {std::move(mu), MetricWeight::gaussian(cfg.weight.c)};
  case WeightSpec::Kind::samples: return {std::move(mu), load_measure(cfg.measure.path).weight()};
  }
  throw ConfigError("unreachable weight kind");
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  feed(cfg.source);
  feed(fmt::format("\nseed={}", cfg.seed));
  return fmt::format("{:016x}", h);
}

} // namespace cdlab
