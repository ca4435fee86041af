#include "ealab/capacities.hpp"

#include <cmath>

namespace ealab {

double classical_capacity(const ChannelParams& ch) {
  ch.validate();
  const double b = ch.n_b, d = ch.kappa * ch.n_s;
  if (d == 0.0) return 0.0;
  if (b == 0.0) return g_entropy(d);
  // g(b+d) - g(b) rearranged so no large terms cancel:
  //   ln2 * C = d ln((b+1)/b) + (b+d+1) log1p(d/(b+1)) - (b+d) log1p(d/b)
  double nat = d * std::log1p(1.0 / b) + (b + d + 1.0) * std::log1p(d / (b + 1.0)) -
               (b + d) * std::log1p(d / b);
  return nat / std::log(2.0);
}

std::pair<double, double> homodyne_heterodyne_rates(const ChannelParams& ch) {
  ch.validate();
  const double kns = ch.kappa * ch.n_s;
  double hom = 0.5 * std::log1p(4.0 * kns / (1.0 + 2.0 * ch.n_b)) / std::log(2.0);
  double het = std::log1p(kns / (1.0 + ch.n_b)) / std::log(2.0);
  return {hom, het};
}

double ea_capacity(const ChannelParams& ch) {
  ch.validate();
  const double ns = ch.n_s;
  if (ns == 0.0) return 0.0;
  const double nsp = ch.kappa * ns + ch.n_b;
  const double sum = ns + nsp + 1.0;
  const double u = nsp - ns;
  double disc = sum * sum - 4.0 * ch.kappa * ns * (ns + 1.0);
  double d = std::sqrt(std::max(disc, 0.0));
  // A± = (D - 1 ± (nsp - ns))/2 suffers catastrophic cancellation (D is large
  // while A- can be tiny); multiply through by the conjugate instead:
  //   D^2 - (1 - u)^2 = 4 n_b (n_s + 1),  D^2 - (1 + u)^2 = 4 n_s (n_b + 1 - kappa)
  double a_plus = 2.0 * ch.n_b * (ns + 1.0) / (d + 1.0 - u);
  double a_minus = 2.0 * ns * (ch.n_b + 1.0 - ch.kappa) / (d + 1.0 + u);
  return g_entropy(ns) + g_entropy(nsp) - g_entropy(a_plus) - g_entropy(a_minus);
}

double ea_ratio_limit(double n_s) {
  if (!(n_s > 0.0)) throw std::domain_error("ea_ratio_limit: n_s must be positive");
  return (1.0 + n_s) * std::log1p(1.0 / n_s);
}

double preshared_loss_rate(double kappa0, const ChannelParams& ch) {
  if (!(kappa0 > 0.0 && kappa0 <= 1.0))
    throw std::domain_error("preshared_loss_rate: kappa0 must lie in (0,1]");
  return ea_capacity({kappa0 * ch.kappa, ch.n_b, ch.n_s / kappa0});
}

CapacityReport capacity_report(const ChannelParams& ch) {
  CapacityReport r;
  r.params = ch;
  r.c_classical = classical_capacity(ch);
  auto [hom, het] = homodyne_heterodyne_rates(ch);
  r.c_hom = hom;
  r.c_het = het;
  r.c_ea = ea_capacity(ch);
  r.ratio_ea = (r.c_classical > 0.0) ? r.c_ea / r.c_classical : 0.0;
  return r;
}

}  // namespace ealab
