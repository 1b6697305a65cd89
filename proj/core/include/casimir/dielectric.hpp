#pragma once

#include <istream>
#include <memory>
#include <variant>
#include <vector>

#include "casimir/types.hpp"

namespace casimir {

// Free-electron metal with damping: eps(omega) = 1 - wp^2/(omega^2 + i nu omega).
// On the imaginary axis eps(i zeta) = 1 + wp^2/(zeta(zeta + nu)).
// nu = 0 degenerates to the lossless plasma model.
struct DrudeModel {
  double omega_p;  // plasma frequency, rad/s
  double nu;       // relaxation frequency, rad/s
  DrudeModel(double omega_p_, double nu_) : omega_p(omega_p_), nu(nu_) {
    if (!(omega_p > 0.0)) throw DomainError("Drude: omega_p must be positive");
    if (!(nu >= 0.0)) throw DomainError("Drude: nu must be nonnegative");
  }
};

// Lossless free-electron metal: eps(omega) = 1 - wp^2/omega^2.
struct PlasmaModel {
  double omega_p;
  explicit PlasmaModel(double omega_p_) : omega_p(omega_p_) {
    if (!(omega_p > 0.0)) throw DomainError("plasma: omega_p must be positive");
  }
};

// Frequency-independent permittivity. A diagnostic model for limit studies
// (perfect-mirror limits eps -> infinity, vacuum eps = 1); it is exempt from
// the eps -> 1 high-frequency asymptotics physical models obey.
struct ConstantEpsilonModel {
  complex eps;
  explicit ConstantEpsilonModel(complex eps_) : eps(eps_) {
    if (eps.imag() < 0.0) throw DomainError("constant epsilon: Im eps must be >= 0");
  }
};

struct OpticalSample {
  double omega;   // rad/s
  double eps_re;
  double eps_im;  // >= 0
};

// Measured optical data with log-frequency interpolation and physically
// motivated tails: a Drude-like fit below the table, eps' -> 1 with
// eps'' ~ omega^-3 above. Real-axis queries are limited to one decade of
// grace beyond the table at each end.
class TabulatedModel {
 public:
  explicit TabulatedModel(std::vector<OpticalSample> samples);

  complex real_axis(double omega) const;    // RangeError outside the grace range
  double imag_axis(double zeta) const;      // Kramers-Kronig transform of eps''
  const std::vector<OpticalSample>& samples() const { return samples_; }

 private:
  std::vector<OpticalSample> samples_;
  // Low-frequency eps'' tail: A/(omega (omega^2 + nu^2)); nu_low < 0 marks the
  // 1/omega fallback eps'' = A/omega.
  double low_A_ = 0.0, low_nu_ = -1.0;
  // Low-frequency eps' tail: 1 - B/(omega^2 + kappa^2); kappa_low < 0 marks a
  // constant continuation.
  double low_B_ = 0.0, low_kappa_ = -1.0;
  double high_C_ = 0.0;  // eps' = 1 - C/omega^2
  double high_D_ = 0.0;  // eps'' = D/omega^3
  double interp_im(double omega) const;
  double interp_re(double omega) const;
};

enum class WindowMode { sharp, smooth };

// Transparency window multiplying the susceptibility chi = eps - 1:
//   sharp:  chi -> chi (1 - Delta) strictly inside (omega1, omega2)
//   smooth: chi -> chi [1 - (Delta/pi)(atan(s(omega-omega1)/(c/a))
//                                    + atan(s(omega2-omega)/(c/a)))]
struct WindowSpec {
  double omega1;
  double omega2;
  double delta;  // depth in [0, 1]
  double s;      // edge sharpness (dimensionless, scaled by c/a)
  WindowMode mode;
  WindowSpec(double o1, double o2, double d, double s_, WindowMode m)
      : omega1(o1), omega2(o2), delta(d), s(s_), mode(m) {
    if (!(omega1 > 0.0) || !(omega2 > omega1)) throw DomainError("window: need 0 < omega1 < omega2");
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("window: Delta must be in [0,1]");
    if (!(s > 0.0)) throw DomainError("window: s must be positive");
  }
};

class DielectricModel;

// A base model with a transparency window applied. The separation a fixes the
// c/a frequency scale of the smooth edges.
struct WindowedModel {
  std::shared_ptr<const DielectricModel> base;
  WindowSpec spec;
  double a;
};

class DielectricModel {
 public:
  using Variant =
      std::variant<DrudeModel, PlasmaModel, TabulatedModel, ConstantEpsilonModel, WindowedModel>;

  DielectricModel(DrudeModel m) : v_(std::move(m)) {}
  DielectricModel(PlasmaModel m) : v_(std::move(m)) {}
  DielectricModel(TabulatedModel m) : v_(std::move(m)) {}
  DielectricModel(ConstantEpsilonModel m) : v_(std::move(m)) {}
  DielectricModel(WindowedModel m) : v_(std::move(m)) {}

  static DielectricModel windowed(DielectricModel base, WindowSpec spec, double a) {
    if (!(a > 0.0)) throw DomainError("windowed: separation must be positive");
    return DielectricModel(WindowedModel{
        std::make_shared<const DielectricModel>(std::move(base)), spec, a});
  }

  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

// eps(omega) on the real frequency axis; omega must be positive.
complex permittivity_real_axis(const DielectricModel& model, double omega);

// eps(i zeta) on the positive imaginary axis; real and >= 1 for causal models.
// Smooth-windowed models are real-axis-only and raise UnsupportedModelError:
// their analytic continuation is not defined by the window construction.
double permittivity_imag_axis(const DielectricModel& model, double zeta);

// Window multiplier applied to the susceptibility at omega (>= 0 allowed).
double window_factor(const WindowSpec& spec, double omega, double a);

// Kramers-Kronig image of the eps'' removed by a sharp window from a Drude
// base, evaluated on the imaginary axis (positive for zeta > 0, scaled by
// Delta). The zeta ~ nu point is a removable singularity handled by a Taylor
// expansion.
double delta_eps_imag_axis(const DrudeModel& base, const WindowSpec& spec, double zeta);

// Reads a whitespace- or comma-separated table "omega_eV eps_re eps_im" with
// '#' comments and a mandatory "# units: eV" header line. Frequencies must be
// strictly increasing, eps_im >= 0, at least 8 rows.
TabulatedModel load_optical_table(std::istream& in);

}  // namespace casimir
