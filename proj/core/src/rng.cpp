#include "phidim/rng.hpp"

#include <cmath>

namespace phidim {

double CounterRng::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::exponential() noexcept { return -std::log(uniform_open()); }

}  // namespace phidim
