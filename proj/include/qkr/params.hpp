#pragma once

namespace qkr {

/// Kick strength K and scaled Planck constant hbar of the kicked rotor.
/// kappa = K / hbar is always recomputed from the two stored values.
class KickedRotorParams {
 public:
  KickedRotorParams(double K, double hbar);

  double K() const { return K_; }
  double hbar() const { return hbar_; }
  double kappa() const { return K_ / hbar_; }

 private:
  double K_;
  double hbar_;
};

}  // namespace qkr
