#pragma once

// Experiment configuration: a flat `key = value` text format.
//
//   # comment (also allowed after a value)
//   name = theorem2_sinV
//   geometry = torus            # torus | interval
//   dimension = 1
//   points = 64                 # one value, or one per axis: "32 32"
//   extent = 2*pi               # periods (torus) or length (interval)
//   a = -1
//   V = sin                     # zero | sin | modes
//   V.modes = cos:3:2.0         # kind:k:amplitude (1-D) or kind:k0:k1:amplitude,
//                               # comma separated; term = amplitude * kind(k . x)
//   A = auto                    # or a number >= the certified bound
//   u0 = random                 # constant | mode | kernel | gaussian | random
//   u0.seed = 7
//   t_end = 1
//   dt = 1e-3
//   tol.q = 1e-4
//   out = results/theorem2_sinV
//
// Numbers accept products and quotients with `pi`: 2*pi, pi/2, -0.5*pi.
//
// Initial data presets (every preset except `constant` and `mode` adds
// u0.floor > 0):
//   constant  u0 = u0.value
//   mode      u0 = u0.base + u0.amplitude * cos(u0.k . x)
//   kernel    u0 = torus heat kernel of age u0.t0 centred at the origin + floor
//   gaussian  u0 = exp(-u0.p0 |x|^2 - u0.q0) + floor, minimum-image |x|
//   random    u0 = exp(s) + floor, s a seeded trigonometric polynomial with
//             modes up to u0.band and |s| <= 1

#include "harnack/geometry.hpp"
#include "harnack/harnack.hpp"
#include "harnack/pde_solver.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace harnack {

struct GeometrySpec {
  GeometryKind kind = GeometryKind::PeriodicTorus;
  int dimension = 1;
  std::vector<int> points{64};
  std::vector<double> extent{6.283185307179586};

  bool operator==(const GeometrySpec&) const = default;
};

struct TrigTerm {
  bool cosine = true;
  std::array<double, 2> k{0.0, 0.0};
  double amplitude = 0.0;

  bool operator==(const TrigTerm&) const = default;
};

enum class PotentialKind { Zero, Sin, Modes };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Zero;
  std::vector<TrigTerm> modes;

  bool operator==(const PotentialSpec&) const = default;
};

enum class InitialKind { Constant, Mode, Kernel, Gaussian, Random };

struct InitialSpec {
  InitialKind kind = InitialKind::Constant;
  double value = 1.0;
  double base = 2.0;
  double amplitude = 1.0;
  std::array<double, 2> k{1.0, 0.0};
  double t0 = 0.25;
  double p0 = 1.0;
  double q0 = 0.0;
  std::uint64_t seed = 1;
  int band = 3;
  double floor = 1e-6;

  bool operator==(const InitialSpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  GeometrySpec geometry;
  double a = 0.0;
  PotentialSpec V;
  std::optional<double> A;  // nullopt: certified from V
  InitialSpec u0;
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 1;
  double t_min = 0.05;
  Tolerances tol;
  std::string out;

  bool operator==(const ExperimentConfig& other) const;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Parses and validates; throws ConfigError listing every violation found.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

/// Every key, numbers at 17 significant digits; parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& cfg);

/// Built-in configurations: theorem2_sinV, liyau_sharpness, theorem3_interval.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Semantic violations of an already-parsed config, including every Problem
/// invariant of the problem it builds. Empty when valid.
std::vector<std::string> config_violations(const ExperimentConfig& cfg);

GeometryPtr build_geometry(const GeometrySpec& spec);
FieldFunction potential_function(const PotentialSpec& spec);
FieldFunction initial_function(const InitialSpec& spec, const GeometryPtr& g);

/// exp-free building block of the random preset: sum of seeded cosine and
/// sine terms with all mode numbers |k_i| <= band (cosines only on the
/// interval, so the normal derivative vanishes), coefficients uniform in
/// [-1, 1] and normalized by their l1 norm, so |s| <= 1.
FieldFunction random_trig_polynomial(const Geometry& g, std::uint64_t seed, int band);

/// Throws ConfigError when the config is invalid.
Problem build_problem(const ExperimentConfig& cfg);

}  // namespace harnack
