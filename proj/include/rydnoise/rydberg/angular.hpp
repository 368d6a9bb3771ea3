#pragma once

#include "rydnoise/rydberg/state.hpp"

namespace rydnoise::rydberg {

// Wigner symbols with all arguments passed doubled (2j, 2m) so half-integers
// are exact. Racah formulas; adequate for the small j used here.
double wigner_3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3);
double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6);

// Real field-polarization unit vector in the frame whose z axis is the
// quantization axis. Constructor throws std::invalid_argument unless |n| = 1.
class Polarization {
 public:
  Polarization(double x, double y, double z);
  static Polarization along_quantization_axis() { return {0.0, 0.0, 1.0}; }

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }

 private:
  double x_, y_, z_;
};

// Electric-dipole selection rules in (l, j): |dl| = 1 and |dj| <= 1.
bool dipole_allowed(const RydbergState& a, const RydbergState& b) noexcept;

// Reduced angular matrix element <l_f j_f || r_hat || l_i j_i> (s = 1/2).
double reduced_angular_element(const RydbergState& i, const RydbergState& f);

// Angular factor of |n . <f| r_hat |i>|, summed in quadrature over final m_j and
// averaged over initial m_j (uniform sublevel population) unless the initial
// state fixes m_j. For 57S1/2 -> 57P1/2 this is 1/3 for any linear polarization.
// Throws SelectionRuleError for forbidden pairs.
double angular_factor(const RydbergState& i, const RydbergState& f, const Polarization& pol);

}  // namespace rydnoise::rydberg
