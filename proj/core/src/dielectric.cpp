#include "casimir/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

constexpr double pi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sq(double x) { return x * x; }
double cube(double x) { return x * x * x; }

// int_{w1}^{w2} dw / ((w^2 + nu^2)(w^2 + zeta^2)) near the removable point
// zeta = nu. With B(z) = atan(w2/z) - atan(w1/z) and h(z) = B(nu)/nu - B(z)/z,
// h(nu) = 0, so K = h(z)/((z - nu)(z + nu)) expands through second order in
// (z - nu) using derivatives of B at nu.
double band_kk_taylor(double nu, double zeta, double w1, double w2) {
  const double Bn = std::atan(w2 / nu) - std::atan(w1 / nu);
  const double d2 = sq(nu) + sq(w2), d1 = sq(nu) + sq(w1);
  const double B1 = -w2 / d2 + w1 / d1;
  const double B2 = 2.0 * nu * w2 / sq(d2) - 2.0 * nu * w1 / sq(d1);
  const double B3 = 2.0 * w2 * (sq(w2) - 3.0 * sq(nu)) / cube(d2) -
                    2.0 * w1 * (sq(w1) - 3.0 * sq(nu)) / cube(d1);
  const double h1 = Bn / sq(nu) - B1 / nu;
  const double h2 = -2.0 * Bn / cube(nu) + 2.0 * B1 / sq(nu) - B2 / nu;
  const double h3 = 6.0 * Bn / sq(sq(nu)) - 6.0 * B1 / cube(nu) + 3.0 * B2 / sq(nu) - B3 / nu;
  const double d = zeta - nu;
  return (h1 + 0.5 * h2 * d + h3 / 6.0 * d * d) / (zeta + nu);
}

// int_{w1}^{w2} dw / ((w^2 + nu^2)(w^2 + zeta^2)) by partial fractions. The
// direct form loses ~|nu/(zeta - nu)| digits to cancellation while the Taylor
// truncation error grows as |zeta/nu - 1|^3, so the branch point 1e-3 keeps
// both sides below ~1e-9 relative.
double band_kk_integral(double nu, double zeta, double w1, double w2) {
  if (std::abs(zeta - nu) < 1e-3 * nu) return band_kk_taylor(nu, zeta, w1, w2);
  const double num = (std::atan(w2 / nu) - std::atan(w1 / nu)) / nu -
                     (std::atan(w2 / zeta) - std::atan(w1 / zeta)) / zeta;
  return num / ((zeta - nu) * (zeta + nu));
}

}  // namespace

TabulatedModel::TabulatedModel(std::vector<OpticalSample> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 8) throw DomainError("tabulated model: need at least 8 samples");
  double prev = 0.0;
  for (const auto& s : samples_) {
    if (!std::isfinite(s.omega) || !std::isfinite(s.eps_re) || !std::isfinite(s.eps_im))
      throw DomainError("tabulated model: samples must be finite");
    if (!(s.omega > prev))
      throw DomainError("tabulated model: frequencies must be positive and strictly increasing");
    if (s.eps_im < 0.0) throw DomainError("tabulated model: eps'' must be nonnegative");
    prev = s.omega;
  }

  const auto& s0 = samples_[0];
  const auto& s1 = samples_[1];
  // eps'' below the table: A/(w(w^2 + nu^2)) through the lowest two points,
  // falling back to A/w when the fitted nu^2 is not positive.
  if (s0.eps_im > 0.0 && s1.eps_im > 0.0) {
    const double m0 = s0.eps_im * s0.omega, m1 = s1.eps_im * s1.omega;
    const double nu2 = (m1 * sq(s1.omega) - m0 * sq(s0.omega)) / (m0 - m1);
    if (m0 > m1 && nu2 > 0.0) {
      low_nu_ = std::sqrt(nu2);
      low_A_ = m0 * (sq(s0.omega) + nu2);
    } else {
      low_nu_ = -1.0;
      low_A_ = m0;
    }
  }
  // eps' below the table: 1 - B/(w^2 + kappa^2) when the data look metallic,
  // otherwise a constant continuation.
  const double chi0 = 1.0 - s0.eps_re, chi1 = 1.0 - s1.eps_re;
  if (chi0 > 0.0 && chi1 > 0.0 && chi0 > chi1) {
    const double k2 = (chi1 * sq(s1.omega) - chi0 * sq(s0.omega)) / (chi0 - chi1);
    if (k2 > 0.0) {
      low_kappa_ = std::sqrt(k2);
      low_B_ = chi0 * (sq(s0.omega) + k2);
    }
  }

  const auto& sn = samples_.back();
  high_C_ = (1.0 - sn.eps_re) * sq(sn.omega);
  high_D_ = sn.eps_im * cube(sn.omega);
}

double TabulatedModel::interp_im(double omega) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), omega,
                             [](double w, const OpticalSample& s) { return w < s.omega; });
  if (it == samples_.begin()) return samples_.front().eps_im;
  if (it == samples_.end()) return samples_.back().eps_im;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = std::log(omega / a.omega) / std::log(b.omega / a.omega);
  if (a.eps_im > 0.0 && b.eps_im > 0.0)
    return a.eps_im * std::exp(t * std::log(b.eps_im / a.eps_im));
  return a.eps_im + t * (b.eps_im - a.eps_im);
}

double TabulatedModel::interp_re(double omega) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), omega,
                             [](double w, const OpticalSample& s) { return w < s.omega; });
  if (it == samples_.begin()) return samples_.front().eps_re;
  if (it == samples_.end()) return samples_.back().eps_re;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = std::log(omega / a.omega) / std::log(b.omega / a.omega);
  return a.eps_re + t * (b.eps_re - a.eps_re);
}

complex TabulatedModel::real_axis(double omega) const {
  const double lo = samples_.front().omega, hi = samples_.back().omega;
  if (!(omega >= lo / 10.0 && omega <= hi * 10.0))
    throw RangeError("tabulated model: frequency outside table and grace decade");
  if (omega < lo) {
    const double im = (low_A_ == 0.0) ? 0.0
                      : (low_nu_ > 0.0 ? low_A_ / (omega * (sq(omega) + sq(low_nu_)))
                                       : low_A_ / omega);
    const double re = (low_kappa_ > 0.0) ? 1.0 - low_B_ / (sq(omega) + sq(low_kappa_))
                                         : samples_.front().eps_re;
    return {re, im};
  }
  if (omega > hi)
    return {1.0 - high_C_ / sq(omega), high_D_ > 0.0 ? high_D_ / cube(omega) : 0.0};
  return {interp_re(omega), interp_im(omega)};
}

double TabulatedModel::imag_axis(double zeta) const {
  const double lo = samples_.front().omega, hi = samples_.back().omega;
  double acc = 0.0;

  if (low_A_ > 0.0) {
    if (low_nu_ > 0.0)
      acc += low_A_ * band_kk_integral(low_nu_, zeta, 0.0, lo);
    else
      acc += low_A_ * std::atan(lo / zeta) / zeta;
  }

  const GaussRule& rule = gauss_legendre(16);
  std::vector<double> seg;
  seg.reserve(samples_.size() - 1);
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    const double a = samples_[i].omega, b = samples_[i + 1].omega;
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double w = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[k];
      sum += rule.w[k] * w * interp_im(w) / (sq(w) + sq(zeta));
    }
    seg.push_back(0.5 * (b - a) * sum);
  }
  acc += pairwise_sum(seg);

  if (high_D_ > 0.0) {
    // int_hi^inf dw / (w^2 (w^2 + zeta^2)); series form avoids cancellation
    // when zeta << hi.
    if (zeta < 0.05 * hi) {
      const double r = sq(zeta / hi);
      acc += high_D_ / cube(hi) * (1.0 / 3.0 - r / 5.0 + r * r / 7.0 - r * r * r / 9.0);
    } else {
      acc += high_D_ / sq(zeta) * (1.0 / hi - std::atan(zeta / hi) / zeta);
    }
  }

  return 1.0 + (2.0 / pi) * acc;
}

double window_factor(const WindowSpec& spec, double omega, double a) {
  if (!(omega >= 0.0)) throw DomainError("window_factor: omega must be nonnegative");
  if (!(a > 0.0)) throw DomainError("window_factor: separation must be positive");
  if (spec.mode == WindowMode::sharp)
    return (omega > spec.omega1 && omega < spec.omega2) ? 1.0 - spec.delta : 1.0;
  const double scale = spec.s * a / constants::c;
  return 1.0 - spec.delta / pi *
                   (std::atan(scale * (omega - spec.omega1)) +
                    std::atan(scale * (spec.omega2 - omega)));
}

double delta_eps_imag_axis(const DrudeModel& base, const WindowSpec& spec, double zeta) {
  if (spec.mode != WindowMode::sharp)
    throw UnsupportedModelError("imaginary-axis window correction requires a sharp window");
  if (!(zeta > 0.0)) throw DomainError("delta_eps_imag_axis: zeta must be positive");
  if (base.nu == 0.0) return 0.0;  // lossless base: nothing to remove
  const double k = band_kk_integral(base.nu, zeta, spec.omega1, spec.omega2);
  return spec.delta * (2.0 / pi) * sq(base.omega_p) * base.nu * k;
}

complex permittivity_real_axis(const DielectricModel& model, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError("permittivity_real_axis: omega must be positive and finite");
  return std::visit(
      overloaded{
          [&](const DrudeModel& m) -> complex {
            return 1.0 - sq(m.omega_p) / complex(sq(omega), omega * m.nu);
          },
          [&](const PlasmaModel& m) -> complex {
            return {1.0 - sq(m.omega_p) / sq(omega), 0.0};
          },
          [&](const ConstantEpsilonModel& m) -> complex { return m.eps; },
          [&](const TabulatedModel& m) -> complex { return m.real_axis(omega); },
          [&](const WindowedModel& m) -> complex {
            const complex base = permittivity_real_axis(*m.base, omega);
            const double f = window_factor(m.spec, omega, m.a);
            // Exact pass-through outside the window: round-tripping through
            // 1 + (base - 1) would perturb the last bit.
            if (f == 1.0) return base;
            return 1.0 + (base - 1.0) * f;
          }},
      model.variant());
}

double permittivity_imag_axis(const DielectricModel& model, double zeta) {
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw DomainError("permittivity_imag_axis: zeta must be positive and finite");
  return std::visit(
      overloaded{
          [&](const DrudeModel& m) -> double {
            return 1.0 + sq(m.omega_p) / (zeta * (zeta + m.nu));
          },
          [&](const PlasmaModel& m) -> double { return 1.0 + sq(m.omega_p) / sq(zeta); },
          [&](const ConstantEpsilonModel& m) -> double {
            if (m.eps.imag() != 0.0)
              throw UnsupportedModelError(
                  "constant permittivity with absorption has no imaginary-axis value");
            if (m.eps.real() < 1.0)
              throw DomainError("imaginary-axis permittivity must be >= 1");
            return m.eps.real();
          },
          [&](const TabulatedModel& m) -> double { return m.imag_axis(zeta); },
          [&](const WindowedModel& m) -> double {
            if (m.spec.mode != WindowMode::sharp)
              throw UnsupportedModelError("smooth-windowed models are real-axis only");
            const auto* drude = std::get_if<DrudeModel>(&m.base->variant());
            if (drude == nullptr)
              throw UnsupportedModelError(
                  "imaginary-axis windowed permittivity requires a Drude base");
            return permittivity_imag_axis(*m.base, zeta) -
                   delta_eps_imag_axis(*drude, m.spec, zeta);
          }},
      model.variant());
}

TabulatedModel load_optical_table(std::istream& in) {
  std::string line;
  long lineno = 0;
  bool units_ok = false;
  std::vector<OpticalSample> rows;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    std::string data = (hash == std::string::npos) ? line : line.substr(0, hash);

    if (hash != std::string::npos) {
      std::string norm;
      for (char ch : line.substr(hash + 1))
        if (!std::isspace(static_cast<unsigned char>(ch))) norm += ch;
      if (norm.rfind("units:", 0) == 0) {
        if (norm.substr(6) != "eV")
          throw ParseError("optical table: unsupported units '" + norm.substr(6) + "'", lineno);
        units_ok = true;
      }
    }

    for (char& ch : data)
      if (ch == ',') ch = ' ';
    if (data.find_first_not_of(" \t\r\n") == std::string::npos) continue;

    std::istringstream ss(data);
    double w_eV = 0.0, re = 0.0, im = 0.0;
    std::string extra;
    if (!(ss >> w_eV >> re >> im))
      throw ParseError("optical table: expected 'omega_eV eps_re eps_im'", lineno);
    if (ss >> extra) throw ParseError("optical table: trailing fields", lineno);
    if (!units_ok)
      throw ParseError("optical table: missing '# units: eV' header before data", lineno);
    if (!std::isfinite(w_eV) || !std::isfinite(re) || !std::isfinite(im))
      throw ParseError("optical table: values must be finite", lineno);

    const double w = w_eV * constants::eV_to_rad_s;
    if (!(w > 0.0)) throw ParseError("optical table: frequency must be positive", lineno);
    if (!rows.empty() && !(w > rows.back().omega))
      throw ParseError("optical table: frequencies must be strictly increasing", lineno);
    if (im < 0.0) throw ParseError("optical table: eps'' must be nonnegative", lineno);
    rows.push_back({w, re, im});
  }

  if (rows.size() < 8) throw ParseError("optical table: need at least 8 rows", lineno);
  return TabulatedModel(std::move(rows));
}

}  // namespace casimir
