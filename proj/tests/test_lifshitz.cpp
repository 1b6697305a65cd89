#include "casimir/lifshitz.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/reflection.hpp"
#include "casimir/spectrum.hpp"
#include "doctest.h"
#include "oracles.hpp"

using casimir::complex;
using casimir::ConstantEpsilonModel;
using casimir::ConstantReflection;
using casimir::ContourPoint;
using casimir::DielectricModel;
using casimir::DrudeModel;
using casimir::Method;
using casimir::PhysicalSetup;
using casimir::PlasmaModel;
using casimir::PlatePair;
using casimir::Polarization;
using casimir::PressureResult;
using casimir::QuadratureSpec;
using casimir::SpectralSample;
using casimir::WindowMode;
using casimir::WindowSpec;
using std::numbers::pi;

namespace {

const PhysicalSetup setup100(100e-9);
const QuadratureSpec quad100 = QuadratureSpec::defaults(setup100);

DielectricModel gold() {
  return DielectricModel(DrudeModel{9.0 * casimir::constants::eV_to_rad_s,
                                    0.035 * casimir::constants::eV_to_rad_s});
}

DielectricModel const_eps(double re, double im = 0.0) {
  return DielectricModel(ConstantEpsilonModel{complex(re, im)});
}

QuadratureSpec real_axis_quad(double xi_max, double cutoff) {
  QuadratureSpec q = quad100;
  q.omega_max = xi_max * setup100.c / (2.0 * setup100.a);
  q.cutoff_delta = cutoff;
  return q;
}

// Straight quadrature of the angular integrals the density sums, with the
// Fresnel factors evaluated point by point. Independent of the panelized
// engine and of the polylogarithm shortcuts.
double pw_oracle(complex eps, double xi, Polarization s) {
  auto f = [&](double p) {
    complex r = casimir::fresnel(eps, ContourPoint::propagating(p), s);
    complex u = r * r * std::polar(1.0, p * xi);
    return (p * p * u / (1.0 - u)).real();
  };
  double integral = oracle::integrate(f, 1e-9, 1.0, 1e-13);
  return xi * xi * xi / (16.0 * pi * pi) * integral;
}

double ew_oracle(complex eps, double xi, Polarization s) {
  auto f = [&](double q) {
    complex r = casimir::fresnel(eps, ContourPoint::evanescent(q), s);
    complex u = r * r * std::exp(-q * xi);
    return q * q * (u / (1.0 - u)).imag();
  };
  // A TM surface resonance can sit below q = 1; give the adaptive splitter
  // seams to lock onto, then let the e^{-q xi} decay close the tail.
  double integral = oracle::integrate(f, 1e-9, 0.5, 1e-13) +
                    oracle::integrate(f, 0.5, 2.0, 1e-13) +
                    oracle::integrate(f, 2.0, 2.0 + 80.0 / xi, 1e-13);
  return -xi * xi * xi / (16.0 * pi * pi) * integral;
}

double ladder_deficit(const PressureResult& p, double ideal) { return 1.0 - p.value / ideal; }

}  // namespace

TEST_SUITE_BEGIN("lifshitz");

TEST_CASE("quadrature settings are validated") {
  auto broken = [](auto&& tweak) {
    QuadratureSpec q = QuadratureSpec::defaults(setup100);
    tweak(q);
    return q;
  };
  CHECK_NOTHROW(quad100.validate(setup100));
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.p_nodes = 8; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.omega_panel_width *= 3.0; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.omega_max = 0.0; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.zeta0 = -1.0; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.rel_tol = 0.0; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.rel_tol = 1.0; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.cutoff_delta = 0.0; }).validate(setup100),
                  casimir::DomainError);
  CHECK_THROWS_AS(broken([](QuadratureSpec& q) { q.cutoff_delta = 2.5; }).validate(setup100),
                  casimir::DomainError);
}

TEST_CASE("vacuum plates produce nothing") {
  PlatePair vac((ConstantReflection(0.0)));
  SpectralSample d = casimir::material_spectral_density(vac, setup100, setup100.omega(1.3), quad100);
  CHECK(d.total() == 0.0);
  CHECK(casimir::pressure_imag_frequency(vac, setup100, quad100).value == 0.0);
  CHECK(casimir::pressure_real_frequency(vac, setup100, quad100).value == 0.0);
}

TEST_CASE("constant-reflection plates reproduce the closed-form spectrum") {
  complex ra = std::polar(0.75, 1.2), rb(0.5, -0.4);
  for (double xi : {0.4, 2.2, 9.7}) {
    SpectralSample got = casimir::material_spectral_density(
        PlatePair(ConstantReflection(ra, rb), ConstantReflection(ra, rb)), setup100,
        setup100.omega(xi), quad100);
    SpectralSample want = casimir::total_density(ConstantReflection(ra, rb), xi);
    CHECK(std::abs(got.pw_te - want.pw_te) <= 1e-12 * (1.0 + std::abs(want.pw_te)));
    CHECK(std::abs(got.pw_tm - want.pw_tm) <= 1e-12 * (1.0 + std::abs(want.pw_tm)));
    CHECK(std::abs(got.ew_te - want.ew_te) <= 1e-12 * (1.0 + std::abs(want.ew_te)));
    CHECK(std::abs(got.ew_tm - want.ew_tm) <= 1e-12 * (1.0 + std::abs(want.ew_tm)));
  }

  // Only the product of the two reflections enters; splitting it across the
  // plates differently is invisible, as is swapping the plates.
  ConstantReflection lhs(ra, rb), rhs(rb, ra);
  SpectralSample ab =
      casimir::material_spectral_density(PlatePair(lhs, rhs), setup100, setup100.omega(2.2), quad100);
  SpectralSample ba =
      casimir::material_spectral_density(PlatePair(rhs, lhs), setup100, setup100.omega(2.2), quad100);
  SpectralSample one = casimir::material_spectral_density(
      PlatePair(ConstantReflection(ra * rb, ra * rb), ConstantReflection(1.0, 1.0)), setup100,
      setup100.omega(2.2), quad100);
  CHECK(ab.pw_te == ba.pw_te);
  CHECK(ab.ew_tm == ba.ew_tm);
  CHECK(std::abs(ab.pw_te - one.pw_te) <= 1e-12 * (1.0 + std::abs(one.pw_te)));
  CHECK(std::abs(ab.ew_te - one.ew_te) <= 1e-12 * (1.0 + std::abs(one.ew_te)));
}

TEST_CASE("huge constant permittivity approaches the perfect-mirror density") {
  for (double xi : {1.7, 5.3}) {
    SpectralSample d = casimir::material_spectral_density(PlatePair(const_eps(1e12)), setup100,
                                                          setup100.omega(xi), quad100);
    SpectralSample mirror = casimir::total_density(ConstantReflection(1.0), xi);
    CHECK(std::abs(d.pw_te - mirror.pw_te) < 1e-3 * std::abs(mirror.pw_te));
    CHECK(std::abs(d.pw_tm - mirror.pw_tm) < 1e-3 * std::abs(mirror.pw_tm));
    // The evanescent factors are unit-modulus here, so that sector is a
    // near-cancelling oscillatory remnant, orders below the propagating one.
    CHECK(std::abs(d.ew_te) < 1e-4 * std::abs(d.pw_te));
    CHECK(std::abs(d.ew_tm) < 1e-4 * std::abs(d.pw_tm));
  }
}

TEST_CASE("lossless plasma keeps the evanescent sector dark") {
  PlatePair plates(DielectricModel(PlasmaModel{9.0 * casimir::constants::eV_to_rad_s}));
  for (double xi : {0.5, 3.0}) {
    SpectralSample d =
        casimir::material_spectral_density(plates, setup100, setup100.omega(xi), quad100);
    CHECK(d.ew_te == 0.0);
    CHECK(d.ew_tm == 0.0);
    CHECK(d.pw_tm != 0.0);
  }
}

TEST_CASE("lossy permittivity density matches the angular-integral oracle") {
  for (complex eps : {complex(-20.0, 1.0), complex(2.5, 0.8)}) {
    PlatePair plates(const_eps(eps.real(), eps.imag()));
    for (double xi : {0.8, 2.7, 7.1}) {
      SpectralSample d =
          casimir::material_spectral_density(plates, setup100, setup100.omega(xi), quad100);
      double scale = std::abs(d.pw_te) + std::abs(d.pw_tm) + std::abs(d.ew_te) +
                     std::abs(d.ew_tm) + 1e-6;
      CHECK(std::abs(d.pw_te - pw_oracle(eps, xi, Polarization::te)) < 1e-5 * scale);
      CHECK(std::abs(d.pw_tm - pw_oracle(eps, xi, Polarization::tm)) < 1e-5 * scale);
      CHECK(std::abs(d.ew_te - ew_oracle(eps, xi, Polarization::te)) < 1e-5 * scale);
      CHECK(std::abs(d.ew_tm - ew_oracle(eps, xi, Polarization::tm)) < 1e-5 * scale);
    }
  }
}

TEST_CASE("density surface rejects nonpositive frequencies") {
  PlatePair plates(gold());
  CHECK_THROWS_AS(
      (void)casimir::material_spectral_density(plates, setup100, 0.0, quad100),
      casimir::DomainError);
  CHECK_THROWS_AS(
      (void)casimir::material_spectral_density(plates, setup100, -1e15, quad100),
      casimir::DomainError);
}

TEST_CASE("rotated-contour route hits the closed form for constant reflection") {
  PlatePair plates((ConstantReflection(0.8)));
  PressureResult p = casimir::pressure_imag_frequency(plates, setup100, quad100);
  double closed = casimir::constant_r_pressure(ConstantReflection(0.8), setup100);
  CHECK(std::abs(p.value - closed) < 1e-6 * std::abs(closed));
  CHECK(p.method == Method::imag_frequency);
  CHECK(p.propagating == p.value);
  CHECK(p.evanescent == 0.0);
  CHECK(std::abs(p.te + p.tm - p.value) <= 1e-12 * std::abs(p.value));
  CHECK(std::abs(p.te - p.tm) <= 1e-9 * std::abs(p.value));
  CHECK(p.error_estimate >= 0.0);
  CHECK(p.error_estimate < 1e-4 * std::abs(p.value));
}

TEST_CASE("rotated-contour route is stable against grid refinement") {
  PlatePair plates(gold());
  PressureResult a = casimir::pressure_imag_frequency(plates, setup100, quad100);
  QuadratureSpec q = quad100;
  q.p_nodes = 24;
  q.zeta0 = 0.25 * setup100.c / setup100.a;
  PressureResult b = casimir::pressure_imag_frequency(plates, setup100, q);
  CHECK(std::abs(a.value - b.value) <= 1e-9 * std::abs(a.value));
  // Identical settings reproduce bitwise.
  PressureResult c = casimir::pressure_imag_frequency(plates, setup100, quad100);
  CHECK(c.value == a.value);
  CHECK(c.error_estimate == a.error_estimate);
}

TEST_CASE("constant-permittivity ladder climbs toward the perfect mirror") {
  const double ideal = casimir::ideal_casimir_pressure(setup100);
  double d4 = ladder_deficit(
      casimir::pressure_imag_frequency(PlatePair(const_eps(1e4)), setup100, quad100), ideal);
  double d6 = ladder_deficit(
      casimir::pressure_imag_frequency(PlatePair(const_eps(1e6)), setup100, quad100), ideal);
  double d8 = ladder_deficit(
      casimir::pressure_imag_frequency(PlatePair(const_eps(1e8)), setup100, quad100), ideal);
  double d12 = ladder_deficit(
      casimir::pressure_imag_frequency(PlatePair(const_eps(1e12)), setup100, quad100), ideal);
  CHECK(d4 > d6);
  CHECK(d6 > d8);
  CHECK(d8 > d12);
  CHECK(d12 > 0.0);
  // The deficit falls off as roughly log(eps)/sqrt(eps); pin the measured
  // rungs with enough slack to survive quadrature tweaks.
  CHECK(d4 == doctest::Approx(0.08855).epsilon(0.03));
  CHECK(d6 == doctest::Approx(0.013933).epsilon(0.03));
  CHECK(d8 == doctest::Approx(0.0019044).epsilon(0.03));
  CHECK(d12 < 1e-4);
}

TEST_CASE("gold plates on the rotated contour") {
  PressureResult p = casimir::pressure_imag_frequency(PlatePair(gold()), setup100, quad100);
  CHECK(p.value == doctest::Approx(-5.676081489688).epsilon(1e-8));
  CHECK(p.te < 0.0);
  CHECK(p.tm < 0.0);
  CHECK(std::abs(p.tm) > 2.0 * std::abs(p.te));
  CHECK(std::abs(p.te + p.tm - p.value) <= 1e-12 * std::abs(p.value));

  casimir::EffectiveReflection er = casimir::effective_reflection(p.te, p.tm, setup100);
  CHECK(er.te > 0.0);
  CHECK(er.te < 1.0);
  CHECK(er.tm > er.te);
  CHECK(er.tm < 1.0);
}

TEST_CASE("effective reflection round-trips the closed form") {
  double half = casimir::constant_r_pressure(ConstantReflection(0.7), setup100) / 2.0;
  casimir::EffectiveReflection er = casimir::effective_reflection(half, half, setup100);
  CHECK(er.te == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(er.tm == doctest::Approx(0.7).epsilon(1e-9));

  double cap = casimir::ideal_casimir_pressure(setup100) / 2.0;
  casimir::EffectiveReflection top = casimir::effective_reflection(cap, cap, setup100);
  CHECK(top.te == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS((void)casimir::effective_reflection(1.01 * cap, cap, setup100),
                  casimir::RangeError);
}

TEST_CASE("real-frequency route integrates the constant-reflection spectrum") {
  PlatePair plates((ConstantReflection(0.8)));
  QuadratureSpec q = real_axis_quad(5000.0, 0.05);
  PressureResult p = casimir::pressure_real_frequency(plates, setup100, q);
  double closed = casimir::constant_r_pressure(ConstantReflection(0.8), setup100);
  CHECK(p.method == Method::real_frequency);
  CHECK(std::abs(p.value - closed) < 1e-4 * std::abs(closed));
  CHECK(std::abs(p.value - closed) <= p.error_estimate + 1e-6 * std::abs(closed));
  // Real reflection: the evanescent sector integrates to zero.
  CHECK(std::abs(p.evanescent) < 1e-9 * std::abs(p.value));
}

TEST_CASE("real-frequency and rotated routes agree for gold") {
  PlatePair plates(gold());
  PressureResult imag = casimir::pressure_imag_frequency(plates, setup100, quad100);
  PressureResult real = casimir::pressure_real_frequency(plates, setup100, real_axis_quad(150.0, 0.4));
  CHECK(std::abs(real.value - imag.value) < 0.03 * std::abs(imag.value));
  CHECK(std::abs(real.value - imag.value) <= real.error_estimate + imag.error_estimate);
  CHECK(real.error_estimate < 0.5);
  // On the real axis the pressure splits into a large attractive propagating
  // part and a smaller repulsive evanescent part.
  CHECK(real.propagating < 0.0);
  CHECK(real.evanescent > 0.0);
  CHECK(std::abs(real.propagating) > std::abs(real.evanescent));
  CHECK(std::abs(real.propagating + real.evanescent - real.value) <= 1e-9 * std::abs(real.value));
  CHECK(std::abs(real.te + real.tm - real.value) <= 1e-9 * std::abs(real.value));
}

TEST_CASE("real-frequency route tracks a strong-mirror ladder rung") {
  const double ideal = casimir::ideal_casimir_pressure(setup100);
  PlatePair plates(const_eps(1e4));
  double di =
      ladder_deficit(casimir::pressure_imag_frequency(plates, setup100, quad100), ideal);
  double dr = ladder_deficit(
      casimir::pressure_real_frequency(plates, setup100, real_axis_quad(200.0, 0.4)), ideal);
  CHECK(dr > 0.02);
  // The damped extrapolation carries a small systematic bias for mirrors this
  // strong; the rung still lands near the rotated-contour value.
  CHECK(std::abs(dr - di) < 0.04);
}

TEST_CASE("transparency window: the two routes tell different stories") {
  DielectricModel base = gold();
  WindowSpec sharp(7.5e14, 9.4e15, 1.0, 1.0, WindowMode::sharp);
  PressureResult p = casimir::pressure_imag_frequency(PlatePair(base), setup100, quad100);

  double di = casimir::window_force_difference(base, sharp, setup100, Method::imag_frequency,
                                               quad100);
  // Rotated contour: the window only dents the smoothed susceptibility, so
  // the pressure barely moves (and weakens, as less material reflects).
  CHECK(di > 0.02);
  CHECK(di < 0.08);
  CHECK(std::abs(di) < 0.02 * std::abs(p.value));

  QuadratureSpec qr = real_axis_quad(20.0, 0.05);
  double dr = casimir::window_force_difference(base, sharp, setup100, Method::real_frequency, qr);
  // Real axis: the full band's worth of density disappears from the integral,
  // a shift several times the whole pressure and of the opposite sign.
  CHECK(dr < -25.0);
  CHECK(dr > -45.0);
  CHECK(std::abs(dr) > 3.0 * std::abs(p.value));
  CHECK(std::abs(dr) > 200.0 * std::abs(di));

  WindowSpec off(7.5e14, 9.4e15, 0.0, 1.0, WindowMode::sharp);
  CHECK(casimir::window_force_difference(base, off, setup100, Method::imag_frequency, quad100) ==
        0.0);
  CHECK(casimir::window_force_difference(base, off, setup100, Method::real_frequency, qr) == 0.0);

  WindowSpec smooth(7.5e14, 9.4e15, 1.0, 20.0, WindowMode::smooth);
  CHECK_THROWS_AS((void)casimir::window_force_difference(base, smooth, setup100,
                                                         Method::imag_frequency, quad100),
                  casimir::UnsupportedModelError);
  CHECK_THROWS_AS((void)casimir::window_force_difference(base, sharp, setup100,
                                                         Method::closed_form, quad100),
                  casimir::DomainError);
}

TEST_CASE("windowed plates evaluate deterministically") {
  WindowSpec sharp(7.5e14, 9.4e15, 1.0, 1.0, WindowMode::sharp);
  DielectricModel wa = DielectricModel::windowed(gold(), sharp, setup100.a);
  DielectricModel wb = DielectricModel::windowed(gold(), sharp, setup100.a);
  QuadratureSpec qr = real_axis_quad(20.0, 0.05);
  PressureResult pa = casimir::pressure_real_frequency(PlatePair(wa), setup100, qr);
  PressureResult pb = casimir::pressure_real_frequency(PlatePair(wa, wb), setup100, qr);
  CHECK(pa.value == pb.value);
  CHECK(pa.propagating == pb.propagating);
  CHECK(pa.evanescent == pb.evanescent);

  // Outside the window the model is untouched, including the density values.
  double omega = setup100.omega(8.0);
  SpectralSample dw =
      casimir::material_spectral_density(PlatePair(wa), setup100, omega, quad100);
  SpectralSample dg =
      casimir::material_spectral_density(PlatePair(gold()), setup100, omega, quad100);
  CHECK(dw.pw_te == dg.pw_te);
  CHECK(dw.pw_tm == dg.pw_tm);
  CHECK(dw.ew_te == dg.ew_te);
  CHECK(dw.ew_tm == dg.ew_tm);
}

TEST_SUITE_END();
