#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdlab/kernel.hpp"
#include "cdlab/measure.hpp"
#include "cdlab/toeplitz.hpp"

namespace cdlab {

struct MeasureSpec {
  enum class Kind { circle, chebyshev, uniform, file };
  Kind kind = Kind::circle;
  std::size_t m = 64;
  double radius = 1.0;
  std::filesystem::path path;
  std::vector<std::pair<cplx, double>> atoms;
};

struct WeightSpec {
  enum class Kind { zero, gaussian, samples };
  Kind kind = Kind::zero;
  double c = 0.0;
};

/// Experiment description read from an INI-style file:
///
///   [measure]  kind = circle|chebyshev|uniform|file, m, radius, path,
///              atoms = re,im,w; re,im,w
///   [weight]   phi = zero | gaussian(c) | samples
///   [run]      k, delta, eps, y0, probe_radius, probe_rings, probe_angles,
///              f, g, p, moments, trials, anchor, nevai_radius, seed
///
/// Lists are comma separated; complex values are written `re,im`.
struct ExperimentConfig {
  MeasureSpec measure;
  WeightSpec weight;
  std::vector<std::size_t> k_list;
  double delta = 0.5;
  double eps = 0.25;
  cplx y0 = 0.0;
  ProbeGrid probe;
  std::string f = "re_z";
  std::string g = "re_z";
  std::vector<double> p_list{1.0};
  std::size_t moments = 6;
  std::size_t trials = 100;
  cplx anchor = 0.0;
  double nevai_radius = 0.2;
  std::uint64_t seed = 0;

  /// Raw text the config was parsed from; feeds the output hash.
  std::string source;
};

/// Throws ConfigError (with line number where the parser reports one).
/// Relative measure paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks ordering of k values, parameter ranges and file existence.
void validate(const ExperimentConfig& cfg);

/// Parses `const(c)`, `re_z`, `z`, `rational(a0,a1,...;b0,b1,...)`.
SymbolFunction parse_symbol(const std::string& text);

DiscreteMeasure build_measure(const MeasureSpec& spec);
/// The measure together with its metric weight (samples come from the file).
std::pair<DiscreteMeasure, MetricWeight> build_measure_and_weight(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the config source and seed, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

} // namespace cdlab
