#include "rydnoise/rydberg/angular.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rydnoise/error.hpp"

namespace rydnoise::rydberg {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

bool triangle(int ta, int tb, int tc) {
  return tc >= std::abs(ta - tb) && tc <= ta + tb && (ta + tb + tc) % 2 == 0;
}

// log of the triangle coefficient Delta(a b c), arguments doubled.
double log_delta(int ta, int tb, int tc) {
  return 0.5 * (log_factorial((ta + tb - tc) / 2) + log_factorial((ta - tb + tc) / 2) +
                log_factorial((-ta + tb + tc) / 2) - log_factorial((ta + tb + tc) / 2 + 1));
}

double phase(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double wigner_3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if (!triangle(tj1, tj2, tj3)) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0) return 0.0;

  const int a = (tj1 + tj2 - tj3) / 2;
  const int b = (tj1 - tm1) / 2;
  const int c = (tj2 + tm2) / 2;
  const int d = (tj3 - tj2 + tm1) / 2;
  const int e = (tj3 - tj1 - tm2) / 2;

  const double pre = log_delta(tj1, tj2, tj3) +
                     0.5 * (log_factorial((tj1 + tm1) / 2) + log_factorial((tj1 - tm1) / 2) +
                            log_factorial((tj2 + tm2) / 2) + log_factorial((tj2 - tm2) / 2) +
                            log_factorial((tj3 + tm3) / 2) + log_factorial((tj3 - tm3) / 2));
  const int k_min = std::max({0, -d, -e});
  const int k_max = std::min({a, b, c});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double lt = log_factorial(k) + log_factorial(a - k) + log_factorial(b - k) +
                      log_factorial(c - k) + log_factorial(d + k) + log_factorial(e + k);
    sum += phase(k) * std::exp(pre - lt);
  }
  return phase((tj1 - tj2 - tm3) / 2) * sum;
}

double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6) {
  if (!triangle(tj1, tj2, tj3) || !triangle(tj1, tj5, tj6) || !triangle(tj4, tj2, tj6) ||
      !triangle(tj4, tj5, tj3)) {
    return 0.0;
  }
  const double pre = log_delta(tj1, tj2, tj3) + log_delta(tj1, tj5, tj6) +
                     log_delta(tj4, tj2, tj6) + log_delta(tj4, tj5, tj3);
  const int a1 = (tj1 + tj2 + tj3) / 2;
  const int a2 = (tj1 + tj5 + tj6) / 2;
  const int a3 = (tj4 + tj2 + tj6) / 2;
  const int a4 = (tj4 + tj5 + tj3) / 2;
  const int b1 = (tj1 + tj2 + tj4 + tj5) / 2;
  const int b2 = (tj2 + tj3 + tj5 + tj6) / 2;
  const int b3 = (tj3 + tj1 + tj6 + tj4) / 2;
  const int k_min = std::max({a1, a2, a3, a4});
  const int k_max = std::min({b1, b2, b3});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double lt = log_factorial(k - a1) + log_factorial(k - a2) + log_factorial(k - a3) +
                      log_factorial(k - a4) + log_factorial(b1 - k) + log_factorial(b2 - k) +
                      log_factorial(b3 - k);
    sum += phase(k) * std::exp(pre + log_factorial(k + 1) - lt);
  }
  return sum;
}

Polarization::Polarization(double x, double y, double z) : x_(x), y_(y), z_(z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!(std::fabs(norm - 1.0) < 1e-9)) {
    throw std::invalid_argument("polarization must be a unit vector");
  }
}

bool dipole_allowed(const RydbergState& a, const RydbergState& b) noexcept {
  return std::abs(a.l - b.l) == 1 && std::abs(a.two_j - b.two_j) <= 2;
}

double reduced_angular_element(const RydbergState& i, const RydbergState& f) {
  constexpr int two_s = 1;
  const double lf_c_li = phase(f.l) * std::sqrt((2.0 * f.l + 1.0) * (2.0 * i.l + 1.0)) *
                         wigner_3j(2 * f.l, 2, 2 * i.l, 0, 0, 0);
  const int ph = f.l + (two_s + i.two_j) / 2 + 1;
  return phase(ph) * std::sqrt((i.two_j + 1.0) * (f.two_j + 1.0)) *
         wigner_6j(2 * f.l, f.two_j, two_s, i.two_j, 2 * i.l, 2) * lf_c_li;
}

double angular_factor(const RydbergState& i, const RydbergState& f, const Polarization& pol) {
  if (!dipole_allowed(i, f)) {
    throw SelectionRuleError("dipole transition " + i.label() + " -> " + f.label() +
                             " violates electric-dipole selection rules");
  }
  using cd = std::complex<double>;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Spherical components n_q; n . r = sum_q (-1)^q n_q r_{-q}.
  const cd n_q[3] = {cd(pol.x(), -pol.y()) * inv_sqrt2,   // q = -1
                     cd(pol.z(), 0.0),                    // q = 0
                     -cd(pol.x(), pol.y()) * inv_sqrt2};  // q = +1
  const double reduced = reduced_angular_element(i, f);

  auto sum_over_final = [&](int tmi) {
    double s = 0.0;
    for (int tmf = -f.two_j; tmf <= f.two_j; tmf += 2) {
      cd amp = 0.0;
      for (int q = -1; q <= 1; ++q) {
        const int p = -q;  // component of r
        const double w3 = wigner_3j(f.two_j, 2, i.two_j, -tmf, 2 * p, tmi);
        if (w3 == 0.0) continue;
        amp += phase(q) * n_q[q + 1] * phase((f.two_j - tmf) / 2) * w3 * reduced;
      }
      s += std::norm(amp);
    }
    return s;
  };

  double total = 0.0;
  if (i.two_mj) {
    total = sum_over_final(*i.two_mj);
  } else {
    for (int tmi = -i.two_j; tmi <= i.two_j; tmi += 2) total += sum_over_final(tmi);
    total /= (i.two_j + 1.0);
  }
  return std::sqrt(total);
}

}  // namespace rydnoise::rydberg
