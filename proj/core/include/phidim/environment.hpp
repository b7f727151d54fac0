#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phidim/distribution.hpp"
#include "phidim/level_draw.hpp"

namespace phidim {

/// Truncation of an iid level sequence omega = (draw_1, draw_2, ...).
/// Caches X_j, Y_j, Z_j (nats) for the estimators; `x()[j-1]` is X_j.
class Environment {
 public:
  Environment(std::vector<LevelDraw> draws, std::uint64_t seed, std::string spec_id);

  std::size_t length() const noexcept { return draws_.size(); }
  const std::vector<LevelDraw>& draws() const noexcept { return draws_; }
  /// Level `level` (1-based).
  const LevelDraw& level(std::size_t level) const { return draws_.at(level - 1); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& spec_id() const noexcept { return spec_id_; }

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  std::span<const double> z() const noexcept { return z_; }

  /// -log(r_1 ... r_n), i.e. the log-width of a level-n Moran interval negated.
  double log_scale(std::size_t n) const;

 private:
  std::vector<LevelDraw> draws_;
  std::uint64_t seed_;
  std::string spec_id_;
  std::vector<double> x_, y_, z_;
};

/// Draw `depth` iid levels from `spec`. Level j uses the counter stream
/// (seed, j), so a longer environment extends a shorter one with the same seed.
Environment sample_environment(const DistributionSpec& spec, std::uint64_t seed, std::size_t depth);

/// The single draw for level `level` (1-based) of the stream `seed`.
LevelDraw sample_level(const DistributionSpec& spec, std::uint64_t seed, std::size_t level);

}  // namespace phidim
