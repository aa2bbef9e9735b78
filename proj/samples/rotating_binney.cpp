// Synthesize the even DF of a flattened logarithmic model, add a rotating odd
// part, and print density, rotation and dispersions along the midplane.

#include <cstdio>

#include "dfforge/dfforge.hpp"

int main() {
  using namespace dfforge;
  const BinneyParams p{1.0, 0.8, 1.0};
  const ModelBundle model = binney_bundle(p);
  const EvenDF even = model.synthesize();
  const auto odd = binney_odd_factory(p, 1, 0.8, 1.0);
  const PotentialConvention conv{ConventionKind::UnboundedRising, 0.0};

  std::printf("%6s %12s %12s %12s %12s %12s\n", "R", "rho", "rho_df", "vbar_phi", "sigma_R2", "sigma_phi2");
  for (double R : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double phi = binney_potential(p, R, 0.0);
    const double rho = binney_density(p, R, 0.0);
    const double rho_df = recover_density(even, phi, R).value;
    const double vbar = recover_rotation_generic(odd, conv, phi, R, 20.0).value / (rho * R);
    const MomentField m = dispersion_closed_form(model.model, phi, R, vbar);
    std::printf("%6.2f %12.6g %12.6g %12.6g %12.6g %12.6g\n", R, rho, rho_df, vbar, m.sigma_R2, m.sigma_phi2);
  }
  return 0;
}
