#include "cdlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "cdlab/basis.hpp"
#include "cdlab/errors.hpp"
#include "cdlab/kernel.hpp"
#include "cdlab/toeplitz.hpp"

namespace cdlab {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

namespace {

std::string num(double x) { return format_number(x); }
std::string num(std::size_t x) { return fmt::format("{}", x); }

} // namespace

std::string CsvTable::render(const ExperimentConfig& cfg) const {
  std::string out = fmt::format("# cdlab {} config_hash={} seed={}\n", name, config_hash(cfg), cfg.seed);
  out += fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& r : rows) out += fmt::format("{}\n", fmt::join(r, ","));
  return out;
}

std::filesystem::path CsvTable::write(const std::filesystem::path& dir, const ExperimentConfig& cfg) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  const auto path = dir / (name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << render(cfg);
  return path;
}

DiscreteMeasure random_dominated(const DiscreteMeasure& mu, CounterRng& rng, double lo) {
  std::vector<double> w(mu.weights().begin(), mu.weights().end());
  for (double& x : w) x *= rng.uniform(lo, 1.0);
  return DiscreteMeasure({mu.nodes().begin(), mu.nodes().end()}, std::move(w));
}

CsvTable run_localization(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto [mu, phi] = build_measure_and_weight(cfg);
  CsvTable t{"localization", {"k", "offdiag_mass", "total_mass", "trace_identity_residual"}, {}};
  for (const std::size_t k : cfg.k_list) {
    const auto basis = orthonormal_basis(mu, phi, k);
    const KernelEvaluator ke(basis);
    const double trace = diagonal_integral(ke, mu);
    t.rows.push_back({num(k), num(offdiag_mass(ke, mu, cfg.delta)), num(total_mass(ke, mu)),
                      num(std::abs(trace - static_cast<double>(basis.size())))});
  }
  return t;
}

CsvTable run_forbidden(const ExperimentConfig& cfg) {
  validate(cfg);
  for (const std::size_t k : cfg.k_list) {
    if (vanishing_order(cfg.eps, k) >= k) {
      throw ConfigError(fmt::format("run.eps = {}: ceil(eps * {}) leaves no sections", cfg.eps, k));
    }
  }
  const auto [mu, phi] = build_measure_and_weight(cfg);
  const auto scan = forbidden_scan(mu, phi, cfg.y0, cfg.eps, cfg.k_list, cfg.probe);
  CsvTable t{"forbidden",
             {"k", "m", "sup_partial_diag", "sup_full_diag", "partial_trace", "partial_trace_residual",
              "slope_so_far"},
             {}};
  for (const auto& r : scan.rows) {
    const double expected = static_cast<double>(r.k - r.order);
    t.rows.push_back({num(r.k), num(r.order), num(r.sup_partial), num(r.sup_full), num(r.partial_trace),
                      num(std::abs(r.partial_trace - expected)),
                      r.slope_so_far ? num(*r.slope_so_far) : std::string{}});
  }
  return t;
}

CsvTable run_toeplitz(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto [mu, phi] = build_measure_and_weight(cfg);
  const SymbolFunction f = parse_symbol(cfg.f);
  const SymbolFunction g = parse_symbol(cfg.g);

  CsvTable t{"toeplitz", {"k", "p", "algebra_defect", "szego_residual"}, {}};
  for (std::size_t m = 2; m <= cfg.moments; ++m) t.header.push_back(fmt::format("moment_gap_{}", m));

  for (const std::size_t k : cfg.k_list) {
    const auto basis = orthonormal_basis(mu, phi, k);
    std::string szego;
    std::vector<std::string> gaps;
    if (f.is_real()) {
      szego = num(szego_identity(basis, mu, f).residual());
      for (std::size_t m = 2; m <= cfg.moments; ++m) gaps.push_back(num(moment_gap(basis, mu, f, m)));
    } else {
      gaps.assign(cfg.moments - 1, std::string{});
    }
    for (const double p : cfg.p_list) {
      std::vector<std::string> row{num(k), num(p), num(algebra_defect(basis, mu, f, g, p)), szego};
      row.insert(row.end(), gaps.begin(), gaps.end());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

CsvTable run_lubinsky(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto [mu, phi] = build_measure_and_weight(cfg);
  CounterRng rng(cfg.seed);

  double re_lo = mu.node(0).real(), re_hi = re_lo, im_lo = mu.node(0).imag(), im_hi = im_lo;
  for (const auto& z : mu.nodes()) {
    re_lo = std::min(re_lo, z.real());
    re_hi = std::max(re_hi, z.real());
    im_lo = std::min(im_lo, z.imag());
    im_hi = std::max(im_hi, z.imag());
  }
  const double pad = 0.1 * std::max({re_hi - re_lo, im_hi - im_lo, 1.0});

  CsvTable t{"lubinsky", {"trial", "k", "x_re", "x_im", "lhs", "rhs", "margin"}, {}};
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const std::size_t k = cfg.k_list[rng.index(cfg.k_list.size())];
    // trial 0 compares the measure with itself
    const DiscreteMeasure mu1 = trial == 0 ? mu : random_dominated(mu, rng);
    cplx x;
    if (trial == 0 || rng.uniform() < 0.5) {
      x = mu.node(trial == 0 ? 0 : rng.index(mu.size()));
    } else {
      x = {rng.uniform(re_lo - pad, re_hi + pad), rng.uniform(im_lo - pad, im_hi + pad)};
    }
    const auto r = lubinsky_check(mu1, mu, phi, k, x);
    t.rows.push_back({num(trial), num(k), num(x.real()), num(x.imag()), num(r.lhs), num(r.rhs),
                      num(r.rhs - r.lhs)});
  }
  return t;
}

CsvTable run_skop(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto [mu, phi] = build_measure_and_weight(cfg);
  const SymbolFunction f = parse_symbol(cfg.f);
  CsvTable t{"skop",
             {"k", "hs_norm_sq", "kernel_l2", "rel_gap", "numerical_rank", "rank_bound", "fitted_C"},
             {}};
  double fitted = 0.0;
  for (const std::size_t k : cfg.k_list) {
    const auto basis = orthonormal_basis(mu, phi, k);
    const auto s = s_operator(basis, mu, f);
    if (s.rank_bound > 0) fitted = std::max(fitted, s.kernel_l2 / static_cast<double>(s.rank_bound));
    t.rows.push_back({num(k), num(s.hs_norm_sq), num(s.kernel_l2), num(s.rel_gap()), num(s.numerical_rank),
                      num(s.rank_bound), num(fitted)});
  }
  return t;
}

CsvTable run_nevai(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto [mu, phi] = build_measure_and_weight(cfg);
  CsvTable t{"nevai",
             {"k", "anchor_re", "anchor_im", "mass_outside_r", "vol_nu", "avg_vol_identity_residual"},
             {}};
  for (const std::size_t k : cfg.k_list) {
    const auto basis = orthonormal_basis(mu, phi, k);
    const KernelEvaluator ke(basis);
    const auto at_anchor = nevai_measure(ke, mu, cfg.anchor);

    double avg = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) avg += mu.weight(j) * nevai_measure(ke, mu, mu.node(j)).vol_nu;

    t.rows.push_back({num(k), num(cfg.anchor.real()), num(cfg.anchor.imag()),
                      num(at_anchor.mu_x.mass_outside(cfg.nevai_radius)), num(at_anchor.vol_nu),
                      num(std::abs(avg - 1.0))});
  }
  return t;
}

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"localization", "forbidden", "toeplitz",
                                              "lubinsky",     "skop",      "nevai"};
  return names;
}

CsvTable run_study(std::string_view name, const ExperimentConfig& cfg) {
  if (name == "localization") return run_localization(cfg);
  if (name == "forbidden") return run_forbidden(cfg);
  if (name == "toeplitz") return run_toeplitz(cfg);
  if (name == "lubinsky") return run_lubinsky(cfg);
  if (name == "skop") return run_skop(cfg);
  if (name == "nevai") return run_nevai(cfg);
  throw ConfigError(fmt::format("unknown study '{}'", name));
}

} // namespace cdlab
