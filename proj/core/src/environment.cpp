#include "phidim/environment.hpp"

#include "phidim/errors.hpp"

namespace phidim {

Environment::Environment(std::vector<LevelDraw> draws, std::uint64_t seed, std::string spec_id)
    : draws_(std::move(draws)), seed_(seed), spec_id_(std::move(spec_id)) {
  x_.reserve(draws_.size());
  y_.reserve(draws_.size());
  z_.reserve(draws_.size());
  for (const auto& d : draws_) {
    x_.push_back(d.x());
    y_.push_back(d.y());
    z_.push_back(d.z());
  }
}

double Environment::log_scale(std::size_t n) const {
  if (n > z_.size()) throw DomainError("log_scale: level beyond environment length");
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += z_[j];
  return s;
}

}  // namespace phidim
