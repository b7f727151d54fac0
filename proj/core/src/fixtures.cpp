#include "phidim/fixtures.hpp"

#include "phidim/errors.hpp"

namespace phidim::fixtures {

namespace {

constexpr double kTau = 1.0 / 3.0;

std::vector<double> uniform_vector(int t) {
  return std::vector<double>(static_cast<std::size_t>(t), 1.0 / t);
}

DistributionSpec simplex_product(int t, double r, std::string name) {
  return DistributionSpec(ProductForm{{{t, 1.0}}, FixedRatio{r}, UniformSimplex{}}, kTau,
                          std::move(name));
}

}  // namespace

DistributionSpec middle_third() {
  return DistributionSpec(PointMass{LevelDraw{2, 1.0 / 3.0, {0.5, 0.5}}}, kTau, "middle-third");
}

DistributionSpec uniform_simplex_cantor() { return simplex_product(2, 1.0 / 3.0, "uniform-simplex"); }

DistributionSpec three_child_simplex() { return simplex_product(3, 0.2, "three-child"); }

DistributionSpec one_variable() {
  DiscreteMixture mix;
  mix.atoms = {{0.5, LevelDraw{2, 0.25, uniform_vector(2)}},
               {0.5, LevelDraw{3, 0.2, uniform_vector(3)}}};
  return DistributionSpec(std::move(mix), kTau, "one-variable");
}

DistributionSpec two_atom_mixture() {
  DiscreteMixture mix;
  mix.atoms = {{0.5, LevelDraw{2, 0.1, {0.2, 0.8}}}, {0.5, LevelDraw{2, 0.1, {0.5, 0.5}}}};
  return DistributionSpec(std::move(mix), kTau, "two-atom");
}

DistributionSpec inverse_square(int t_max) { return inverse_square_mixture(t_max, kTau, "inverse-square"); }

DistributionSpec uniform_ratio_halves() {
  return DistributionSpec(ProductForm{{{2, 1.0}}, UniformRatio{0.5}, FixedProbabilities{{0.5, 0.5}}},
                          kTau, "uniform-ratio");
}

std::vector<NamedFixture> all() {
  return {{"middle-third", middle_third()},     {"uniform-simplex", uniform_simplex_cantor()},
          {"three-child", three_child_simplex()}, {"one-variable", one_variable()},
          {"two-atom", two_atom_mixture()},       {"inverse-square", inverse_square()},
          {"uniform-ratio", uniform_ratio_halves()}};
}

DistributionSpec by_name(const std::string& key) {
  for (auto& f : all()) {
    if (f.key == key) return std::move(f.spec);
  }
  throw ConfigError("unknown fixture '" + key + "'");
}

}  // namespace phidim::fixtures
