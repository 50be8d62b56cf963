#ifndef SVCIP_CONFIG_HPP
#define SVCIP_CONFIG_HPP

#include <stdexcept>
#include <string>

namespace svcip {

enum class Scheme { SvCip, SvPlain, ThGradDiv };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);  // throws std::invalid_argument

/// A numerical failure (singular factorization, NaN state, ...). CLI exit code 1.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment: scheme, mesh, physics and stepping parameters.
struct RunConfig {
  Scheme scheme = Scheme::SvCip;
  int k = 2;
  int N = 6;
  double nu = 1e-8;
  double T = 4.0;

  double delta1 = 1e-2;
  double delta2 = 1e-4;
  double delta3 = 1e-3;
  double u_floor = 1e-8;
  bool cip_global_h = false;
  double gamma_gd = 0.05;

  bool dt_auto = true;
  double dt = 0.0;        // used when dt_auto == false; must divide 0.1
  double dt_theta = 0.5;  // auto policy: dt = min(dt_cap, theta * h^((k+1/2)/2))
  double dt_cap = 0.05;

  double perturbation_amplitude = 0.0;  // gradient body-force amplitude

  std::string out_dir;
  bool write_vtk = false;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

}  // namespace svcip

#endif
