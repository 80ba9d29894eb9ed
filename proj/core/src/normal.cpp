#include "gad/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

namespace gad {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kTwoPi = 2.0 * kPi;

// Half-sets of the 6-, 12- and 20-point Gauss-Legendre rules on [-1, 1].
constexpr std::array<double, 3> kW6{0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 3> kX6{-0.9324695142031522, -0.6612093864662647,
                                    -0.2386191860831970};
constexpr std::array<double, 6> kW12{0.04717533638651177, 0.1069393259953183,
                                     0.1600783285433464,  0.2031674267230659,
                                     0.2334925365383547,  0.2491470458134029};
constexpr std::array<double, 6> kX12{-0.9815606342467191, -0.9041172563704750,
                                     -0.7699026741943050, -0.5873179542866171,
                                     -0.3678314989981802, -0.1252334085114692};
constexpr std::array<double, 10> kW20{0.01761400713915212, 0.04060142980038694,
                                      0.06267204833410906, 0.08327674157670475,
                                      0.1019301198172404,  0.1181945319615184,
                                      0.1316886384491766,  0.1420961093183821,
                                      0.1491729864726037,  0.1527533871307259};
constexpr std::array<double, 10> kX20{-0.9931285991850949, -0.9639719272779138,
                                      -0.9122344282513259, -0.8391169718222188,
                                      -0.7463319064601508, -0.6360536807265150,
                                      -0.5108670019508271, -0.3737060887154196,
                                      -0.2277858511416451, -0.07652652113349733};

struct Rule {
  std::span<const double> w;
  std::span<const double> x;
};

Rule rule_for(double abs_rho) {
  if (abs_rho < 0.3) return {kW6, kX6};
  if (abs_rho < 0.75) return {kW12, kX12};
  return {kW20, kX20};
}

}  // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double two_sided_tail(double z) { return std::erfc(std::abs(z) / kSqrt2); }

double bvn_upper(double h, double k, double rho) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (h == inf || k == inf) return 0.0;
  if (h == -inf) return k == -inf ? 1.0 : normal_cdf(-k);
  if (k == -inf) return normal_cdf(-h);
  if (rho == 0.0) return normal_cdf(-h) * normal_cdf(-k);

  const Rule rule = rule_for(std::abs(rho));
  double hk = h * k;
  double bvn = 0.0;

  if (std::abs(rho) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(rho);
    for (std::size_t i = 0; i < rule.w.size(); ++i) {
      double sn = std::sin(asr * (rule.x[i] + 1.0) / 2.0);
      bvn += rule.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      sn = std::sin(asr * (-rule.x[i] + 1.0) / 2.0);
      bvn += rule.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
    return std::clamp(bvn * asr / (2.0 * kTwoPi) + normal_cdf(-h) * normal_cdf(-k), 0.0, 1.0);
  }

  if (rho < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(rho) < 1.0) {
    const double as = (1.0 - rho) * (1.0 + rho);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    }
    if (hk > -100.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < rule.w.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        double xs = a * (sign * rule.x[i] + 1.0);
        xs *= xs;
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          const double rs = std::sqrt(1.0 - xs);
          bvn += a * rule.w[i] * std::exp(asr) *
                 (std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs -
                  (1.0 + c * xs * (1.0 + d * xs)));
        }
      }
    }
    bvn = -bvn / kTwoPi;
  }
  if (rho > 0.0) {
    bvn += normal_cdf(-std::max(h, k));
  } else {
    bvn = -bvn;
    if (k > h) {
      if (h < 0.0) {
        bvn += normal_cdf(k) - normal_cdf(h);
      } else {
        bvn += normal_cdf(-h) - normal_cdf(-k);
      }
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

double bvn_central_rectangle(double a, double b, double rho) {
  // P(-a<U<a, -b<V<b) by inclusion-exclusion over upper orthants.
  return bvn_upper(-a, -b, rho) - bvn_upper(a, -b, rho) - bvn_upper(-a, b, rho) +
         bvn_upper(a, b, rho);
}

double bvn_corner_mass(double a, double b, double rho) {
  a = std::abs(a);
  b = std::abs(b);
  return std::min(1.0, 2.0 * (bvn_upper(a, b, rho) + bvn_upper(a, b, -rho)));
}

}  // namespace gad
