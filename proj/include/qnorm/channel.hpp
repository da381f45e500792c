#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace qnorm {

// Quantum-limited beam-splitter loss with transmittivity in (0, 1].
struct Attenuator {
  double transmittivity;
  friend bool operator==(const Attenuator&, const Attenuator&) = default;
};

// Quantum-limited phase-insensitive amplifier with gain >= 1.
struct Amplifier {
  double gain;
  friend bool operator==(const Amplifier&, const Amplifier&) = default;
};

// Phase rotation by angle (radians).
struct Rotation {
  double angle;
  friend bool operator==(const Rotation&, const Rotation&) = default;
};

// Displacement in the alpha plane.
struct Displacement {
  std::complex<double> alpha;
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

using ChannelElement = std::variant<Attenuator, Amplifier, Rotation, Displacement>;

// Ordered composition of primitive single-mode channels, applied front to back.
// Both engines interpret the same description.
class ChannelSpec {
 public:
  ChannelSpec() = default;

  // Identity channel.
  static ChannelSpec identity() { return {}; }
  static ChannelSpec attenuator(double transmittivity);
  static ChannelSpec amplifier(double gain);
  static ChannelSpec rotation(double angle);
  static ChannelSpec displacement(std::complex<double> alpha);

  // The Gaussian classicalizer: 50% loss followed by gain 2. Output P function
  // equals the input Husimi function.
  static ChannelSpec classicalizer();

  // *this followed by next.
  ChannelSpec then(const ChannelSpec& next) const;

  const std::vector<ChannelElement>& elements() const noexcept { return elements_; }
  bool empty() const noexcept { return elements_.empty(); }

  // True for exactly [Attenuator(1/2), Amplifier(2)].
  bool is_classicalizer() const noexcept;

  std::string describe() const;

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;

 private:
  explicit ChannelSpec(ChannelElement e) : elements_{e} {}
  std::vector<ChannelElement> elements_;
};

}  // namespace qnorm
