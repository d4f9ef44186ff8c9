#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <slabrt/profile.hpp>

namespace slabrt::cli {

enum class Format { Csv, Json, Svg };

struct ProfileSpec {
  std::string preset = "linear-up";
  std::optional<std::filesystem::path> csv;
  double center = 0.5;
  double width = 0.1;
  double value = 1.0;
};

struct EvolveOptions {
  std::optional<double> dt;
  std::optional<double> t_end;
  double epsilon = 1e-3;
  /// auto | mode | random | zero. auto uses the mode when one grows.
  std::string init = "auto";
  std::uint64_t seed = 1;
  int sample_every = 10;
};

struct EscapeOptions {
  double epsilon = 1.0;
  double m0 = 1.0;
  double delta = 0.01;
  std::string variant = "A";
  /// Replaces the scanned Lambda when set.
  std::optional<double> lambda;
};

struct RunConfig {
  ProfileSpec profile;
  SlabConfig slab;
  int n = 128;
  std::optional<double> band_a;
  std::optional<double> band_b;
  int n_samples = 64;
  double xi = 2.0;
  EvolveOptions evolve;
  EscapeOptions escape;
  std::filesystem::path out_dir = "out";
  std::set<Format> formats{Format::Csv, Format::Json, Format::Svg};

  bool wants(Format f) const { return formats.count(f) != 0; }
  /// Throws InvalidInput for out-of-range values.
  void validate() const;
  DensityProfile make_profile() const;
};

/// Reads an INI file with sections [profile], [physics], [grid], [band],
/// [dispersion], [mode], [evolve], [escape] and [output], after applying
/// "section.key=value" overrides in order. Unknown sections or keys are
/// rejected. Relative CSV paths resolve against the config directory.
/// Throws slabrt::Error(InvalidInput) on any parse problem.
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

std::set<Format> parse_formats(const std::string& list);

}  // namespace slabrt::cli
