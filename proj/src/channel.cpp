#include "qnorm/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qnorm {

ChannelSpec ChannelSpec::attenuator(double transmittivity) {
  if (!(transmittivity > 0.0 && transmittivity <= 1.0))
    throw std::invalid_argument("attenuator transmittivity must lie in (0, 1]");
  return ChannelSpec(Attenuator{transmittivity});
}

ChannelSpec ChannelSpec::amplifier(double gain) {
  if (!(gain >= 1.0) || !std::isfinite(gain))
    throw std::invalid_argument("amplifier gain must be >= 1");
  return ChannelSpec(Amplifier{gain});
}

ChannelSpec ChannelSpec::rotation(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
  return ChannelSpec(Rotation{angle});
}

ChannelSpec ChannelSpec::displacement(std::complex<double> alpha) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw std::invalid_argument("displacement must be finite");
  return ChannelSpec(Displacement{alpha});
}

ChannelSpec ChannelSpec::classicalizer() { return attenuator(0.5).then(amplifier(2.0)); }

ChannelSpec ChannelSpec::then(const ChannelSpec& next) const {
  ChannelSpec out = *this;
  out.elements_.insert(out.elements_.end(), next.elements_.begin(), next.elements_.end());
  return out;
}

bool ChannelSpec::is_classicalizer() const noexcept {
  return elements_.size() == 2 && elements_[0] == ChannelElement{Attenuator{0.5}} &&
         elements_[1] == ChannelElement{Amplifier{2.0}};
}

std::string ChannelSpec::describe() const {
  if (elements_.empty()) return "identity";
  std::ostringstream os;
  bool first = true;
  for (const auto& e : elements_) {
    if (!first) os << " -> ";
    first = false;
    std::visit(
        [&os](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, Attenuator>) os << "E(" << el.transmittivity << ")";
          else if constexpr (std::is_same_v<T, Amplifier>) os << "A(" << el.gain << ")";
          else if constexpr (std::is_same_v<T, Rotation>) os << "R(" << el.angle << ")";
          else os << "D(" << el.alpha.real() << (el.alpha.imag() < 0 ? "" : "+") << el.alpha.imag() << "i)";
        },
        e);
  }
  return os.str();
}

}  // namespace qnorm
