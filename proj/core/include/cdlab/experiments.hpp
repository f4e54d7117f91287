#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cdlab/config.hpp"
#include "cdlab/measure.hpp"
#include "cdlab/random.hpp"

namespace cdlab {

/// Rows of already formatted fields. Numbers use 17 significant digits.
struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Comment line with the config hash, header row, rows; LF endings.
  std::string render(const ExperimentConfig& cfg) const;
  /// Writes <dir>/<name>.csv and returns the path.
  std::filesystem::path write(const std::filesystem::path& dir, const ExperimentConfig& cfg) const;
};

std::string format_number(double x);

/// Off-diagonal mass, total mass and trace identity per k.
CsvTable run_localization(const ExperimentConfig& cfg);
/// Partial-kernel suprema near y0 and their decay slope.
CsvTable run_forbidden(const ExperimentConfig& cfg);
/// Algebra defect, Szego residual and moment gaps per (k, p).
CsvTable run_toeplitz(const ExperimentConfig& cfg);
/// Seeded random dominated pairs.
CsvTable run_lubinsky(const ExperimentConfig& cfg);
/// Hilbert-Schmidt identity and rank bound for S_k.
CsvTable run_skop(const ExperimentConfig& cfg);
/// Nevai measure concentration at the anchor.
CsvTable run_nevai(const ExperimentConfig& cfg);

/// Runs the named study (`localization`, `forbidden`, `toeplitz`,
/// `lubinsky`, `skop`, `nevai`). Throws ConfigError for an unknown name.
CsvTable run_study(std::string_view name, const ExperimentConfig& cfg);

const std::vector<std::string>& study_names();

/// Same atoms as mu, weights scaled by factors drawn uniformly in [lo, 1].
DiscreteMeasure random_dominated(const DiscreteMeasure& mu, CounterRng& rng, double lo = 0.05);

} // namespace cdlab
