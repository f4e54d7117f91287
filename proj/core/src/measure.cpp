#include "cdlab/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "cdlab/errors.hpp"

namespace cdlab {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Merge nodes closer than the tolerance into the first occurrence.
void merge_coincident(std::vector<cplx>& nodes, std::vector<double>& weights) {
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a].real() < nodes[b].real(); });

  std::vector<std::size_t> target(nodes.size());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = i;
  auto root = [&](std::size_t i) {
    while (target[i] != i) i = target[i] = target[target[i]];
    return i;
  };
  for (std::size_t a = 0; a < order.size(); ++a) {
    const std::size_t ia = order[a];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const std::size_t ib = order[b];
      if (nodes[ib].real() - nodes[ia].real() > kNodeMergeTolerance) break;
      if (std::abs(nodes[ib] - nodes[ia]) < kNodeMergeTolerance) {
        const std::size_t ra = root(ia);
        const std::size_t rb = root(ib);
        target[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = root(i);

  std::vector<cplx> out_nodes;
  std::vector<double> out_weights;
  std::vector<std::size_t> slot(nodes.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t t = target[i];
    if (slot[t] == std::numeric_limits<std::size_t>::max()) {
      slot[t] = out_nodes.size();
      out_nodes.push_back(nodes[t]);
      out_weights.push_back(0.0);
    }
    out_weights[slot[t]] += weights[i];
  }
  nodes = std::move(out_nodes);
  weights = std::move(out_weights);
}

} // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<cplx> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.size() != weights_.size()) {
    throw InvalidArgument(fmt::format("measure: {} nodes but {} weights", nodes_.size(),
                                      weights_.size()));
  }
  if (nodes_.empty()) throw EmptyMeasure("measure has no atoms");
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (!finite(nodes_[j])) throw NonfiniteNode(fmt::format("node {} is not finite", j));
    if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j])) {
      throw NonpositiveWeight(fmt::format("weight {} of node {} is not positive", weights_[j], j));
    }
  }
  merge_coincident(nodes_, weights_);
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double DiscreteMeasure::diameter() const {
  double d = 0.0;
  for (std::size_t a = 0; a < nodes_.size(); ++a)
    for (std::size_t b = a + 1; b < nodes_.size(); ++b) d = std::max(d, std::abs(nodes_[a] - nodes_[b]));
  return d;
}

std::size_t DiscreteMeasure::find(cplx z) const {
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    if (std::abs(nodes_[j] - z) < kNodeMergeTolerance) return j;
  return nodes_.size();
}

DiscreteMeasure DiscreteMeasure::scaled(double c) const {
  std::vector<double> w = weights_;
  for (double& x : w) x *= c;
  return DiscreteMeasure(nodes_, std::move(w));
}

MetricWeight::MetricWeight(Evaluator phi, std::string description)
    : phi_(std::move(phi)), description_(std::move(description)) {}

MetricWeight MetricWeight::zero() {
  MetricWeight w([](cplx) { return 0.0; }, "zero");
  w.is_zero_ = true;
  return w;
}

MetricWeight MetricWeight::gaussian(double c) {
  return MetricWeight([c](cplx z) { return c * std::norm(z); }, fmt::format("gaussian({})", c));
}

MetricWeight MetricWeight::samples(std::vector<cplx> points, std::vector<double> values) {
  if (points.size() != values.size() || points.empty()) {
    throw InvalidArgument("MetricWeight::samples: need matching, nonempty sample lists");
  }
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("MetricWeight::samples: non-finite phi sample");
  const bool all_zero = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  auto eval = [pts = std::move(points), vals = std::move(values)](cplx z) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double d = std::norm(pts[j] - z);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return vals[best];
  };
  MetricWeight w(std::move(eval), "samples");
  w.is_zero_ = all_zero;
  return w;
}

BumpProfile::BumpProfile(cplx center, double r_in, double r_out)
    : center_(center), r_in_(r_in), r_out_(r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in) || !finite(center)) {
    throw InvalidArgument(fmt::format("bump: need 0 < r_in < r_out, got {} and {}", r_in, r_out));
  }
}

double BumpProfile::operator()(cplx z) const {
  const double r = std::abs(z - center_);
  if (r <= r_in_) return 0.0;
  if (r >= r_out_) return 1.0;
  return (r - r_in_) / (r_out_ - r_in_);
}

DiscreteMeasure make_measure(std::vector<cplx> nodes, std::vector<double> weights) {
  return DiscreteMeasure(std::move(nodes), std::move(weights));
}

DiscreteMeasure gen_circle(std::size_t m, double radius) {
  if (m == 0) throw InvalidArgument("gen_circle: m must be positive");
  if (!(radius > 0.0)) throw InvalidArgument("gen_circle: radius must be positive");
  std::vector<cplx> nodes(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    nodes[j] = std::polar(radius, t);
  }
  // exact values at the quarter turns
  for (std::size_t q = 0; q < 4; ++q) {
    if ((q * m) % 4 != 0) continue;
    const cplx exact[4] = {{radius, 0.0}, {0.0, radius}, {-radius, 0.0}, {0.0, -radius}};
    nodes[q * m / 4] = exact[q];
  }
  return DiscreteMeasure(std::move(nodes), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

DiscreteMeasure gen_interval(std::size_t m, IntervalRule rule) {
  if (m == 0) throw InvalidArgument("gen_interval: m must be positive");
  const double md = static_cast<double>(m);
  std::vector<cplx> nodes(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double jd = static_cast<double>(j);
    const double x = rule == IntervalRule::chebyshev
                         ? std::cos((2.0 * jd + 1.0) * std::numbers::pi / (2.0 * md))
                         : -1.0 + (2.0 * jd + 1.0) / md;
    nodes[j] = x;
  }
  if (rule == IntervalRule::chebyshev && m % 2 == 1) nodes[m / 2] = 0.0;
  return DiscreteMeasure(std::move(nodes), std::vector<double>(m, 1.0 / md));
}

DiscreteMeasure add_atoms(const DiscreteMeasure& base, const DiscreteMeasure& atoms) {
  return add_atoms(base, atoms.nodes(), atoms.weights());
}

DiscreteMeasure add_atoms(const DiscreteMeasure& base, std::span<const cplx> nodes,
                          std::span<const double> weights) {
  std::vector<cplx> n(base.nodes().begin(), base.nodes().end());
  std::vector<double> w(base.weights().begin(), base.weights().end());
  n.insert(n.end(), nodes.begin(), nodes.end());
  w.insert(w.end(), weights.begin(), weights.end());
  return DiscreteMeasure(std::move(n), std::move(w));
}

DiscreteMeasure truncate(const DiscreteMeasure& mu, const BumpProfile& bump) {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const double w = mu.weight(j) * bump(mu.node(j));
    if (w < 1e-300) continue;
    nodes.push_back(mu.node(j));
    weights.push_back(w);
  }
  if (nodes.empty()) throw EmptyMeasure("truncate: bump removes every atom");
  return DiscreteMeasure(std::move(nodes), std::move(weights));
}

bool is_dominated(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2) {
  for (std::size_t j = 0; j < mu1.size(); ++j) {
    const std::size_t at = mu2.find(mu1.node(j));
    if (at == mu2.size()) return false;
    if (mu2.weight(at) < mu1.weight(j) - 1e-14) return false;
  }
  return true;
}

MetricWeight MeasureFile::weight() const {
  const bool all_zero = std::all_of(phi.begin(), phi.end(), [](double v) { return v == 0.0; });
  if (all_zero) return MetricWeight::zero();
  return MetricWeight::samples({measure.nodes().begin(), measure.nodes().end()}, phi);
}

namespace {

double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, fmt::format("cannot parse number '{}'", field));
  }
  return v;
}

} // namespace

MeasureFile parse_measure(const std::string& text) {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::vector<double> phis;

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view sv(raw);
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    if (sv.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = sv.find(',', start);
      fields.push_back(sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      throw ParseError(line, fmt::format("expected 4 columns re,im,weight,phi, found {}",
                                         fields.size()));
    }
    const double re = parse_double(fields[0], line);
    const double im = parse_double(fields[1], line);
    const double w = parse_double(fields[2], line);
    const double phi = parse_double(fields[3], line);
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(line, "node is not finite");
    if (!(w > 0.0)) throw ParseError(line, fmt::format("weight {} is not positive", w));
    if (!std::isfinite(phi)) throw ParseError(line, "phi is not finite");
    nodes.emplace_back(re, im);
    weights.push_back(w);
    phis.push_back(phi);
  }
  if (nodes.empty()) throw EmptyMeasure("measure file contains no atoms");

  DiscreteMeasure mu(nodes, weights);
  std::vector<double> merged_phi(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      if (std::abs(nodes[r] - mu.node(j)) < kNodeMergeTolerance) {
        merged_phi[j] = phis[r];
        break;
      }
    }
  }
  return {std::move(mu), std::move(merged_phi)};
}

MeasureFile load_measure(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("cannot open measure file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_measure(buf.str());
}

std::string format_measure(const DiscreteMeasure& mu, std::span<const double> phi) {
  if (!phi.empty() && phi.size() != mu.size()) {
    throw InvalidArgument("format_measure: phi sample count differs from node count");
  }
  std::string out = "# re,im,weight,phi\n";
  for (std::size_t j = 0; j < mu.size(); ++j) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", mu.node(j).real(), mu.node(j).imag(),
                       mu.weight(j), phi.empty() ? 0.0 : phi[j]);
  }
  return out;
}

void save_measure(const std::filesystem::path& path, const DiscreteMeasure& mu,
                  std::span<const double> phi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument(fmt::format("cannot write measure file '{}'", path.string()));
  out << format_measure(mu, phi);
}

} // namespace cdlab
