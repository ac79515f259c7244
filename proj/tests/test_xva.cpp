#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mva/xva.hpp"

using namespace mva;

namespace {

ZeroCurve ramp_curve() {
  ZeroCurve c;
  for (std::size_t j = 0; j < kTenorCount; ++j) {
    c.zeros[j] = 0.016 + 0.0007 * static_cast<double>(j);
  }
  return c;
}

PathGrid sim_grid(const ZeroCurve& base, std::size_t n_paths, double horizon) {
  ModelParams m;
  m.base_curve = base;
  m.sigma = 0.011;
  m.mean_reversion = 0.05;
  SimGrid g;
  g.dates = SimGrid::semiannual(horizon);
  g.n_paths = n_paths;
  g.seed = 40;
  return simulate(m, g);
}

ImProfile flat_im_profile(double level, double horizon) {
  ImProfile im;
  im.dates = SimGrid::semiannual(horizon);
  im.expected_im.assign(im.dates.size(), level);
  im.n_paths = 1;
  return im;
}

}  // namespace

TEST_CASE("trapezoid integrates piecewise-linear data exactly") {
  std::vector<double> d = {0.0, 0.5, 1.0};
  std::vector<double> v = {0.0, 1.0, 2.0};
  CHECK(trapezoid(d, v) == 1.0);
  std::vector<double> flat = {3.0, 3.0, 3.0};
  CHECK(trapezoid(d, flat) == 3.0);
  std::vector<double> one_date = {0.0};
  std::vector<double> one_val = {5.0};
  CHECK(trapezoid(one_date, one_val) == 0.0);
  std::vector<double> short_vals = {1.0, 2.0};
  CHECK_THROWS_AS(trapezoid(d, short_vals), std::domain_error);
}

TEST_CASE("adjustment discount reduces to the curve discount without hazards") {
  ZeroCurve base = ramp_curve();
  XvaParams xp;
  xp.lambda_b = 0.0;
  xp.lambda_c = 0.0;
  for (double u : {0.0, 0.5, 3.25, 12.0, 30.0}) {
    CHECK(adjustment_discount(xp, base, u) == discount_factor(base, u));
  }
}

TEST_CASE("adjustment discount compounds hazards into the exponent") {
  ZeroCurve base = ZeroCurve::flat(0.025);
  XvaParams xp;
  xp.lambda_b = 0.0167;
  xp.lambda_c = 0.005;
  CHECK(adjustment_discount(xp, base, 5.0) ==
        doctest::Approx(std::exp(-(0.025 + 0.0167 + 0.005) * 5.0))
            .epsilon(1e-14));
  CHECK_THROWS_AS(adjustment_discount(xp, base, -1.0), std::domain_error);
}

TEST_CASE("exposure profiles are pathwise means of full revaluation") {
  ZeroCurve base = ramp_curve();
  PathGrid pg = sim_grid(base, 16, 6.0);
  Portfolio book = {
      {3e7, 0.021, 1.0, 5.5, true, 2},
      {2e7, 0.018, 0.8, 2.0, false, 2},
  };
  ExposureProfiles ep = exposure_profiles(pg, book);
  REQUIRE(ep.dates == pg.dates());
  REQUIRE(ep.n_paths == 16);
  for (std::size_t k = 0; k < pg.n_dates(); ++k) {
    double pos = 0.0, neg = 0.0, mean = 0.0;
    for (std::size_t p = 0; p < 16; ++p) {
      const double v = price_portfolio(pg.curve_at(p, k), pg.date(k), book);
      pos += v > 0.0 ? v : 0.0;
      neg += v < 0.0 ? v : 0.0;
      mean += v;
    }
    CHECK(ep.epe[k] == pos / 16.0);
    CHECK(ep.ene[k] == neg / 16.0);
    CHECK(ep.mean_value[k] == mean / 16.0);
    CHECK(ep.epe[k] >= 0.0);
    CHECK(ep.ene[k] <= 0.0);
    CHECK(ep.epe[k] + ep.ene[k] ==
          doctest::Approx(ep.mean_value[k]).epsilon(1e-9));
  }
}

TEST_CASE("mirrored books swap and negate the exposure profiles exactly") {
  ZeroCurve base = ramp_curve();
  PathGrid pg = sim_grid(base, 24, 8.0);
  Portfolio book = {
      {4e7, 0.02, 1.0, 7.5, true, 2},
      {1e7, 0.025, 1.2, 4.0, false, 2},
  };
  ExposureProfiles ep = exposure_profiles(pg, book);
  ExposureProfiles em = exposure_profiles(pg, mirrored(book));
  for (std::size_t k = 0; k < pg.n_dates(); ++k) {
    CHECK(em.epe[k] == -ep.ene[k]);
    CHECK(em.ene[k] == -ep.epe[k]);
    CHECK(em.mean_value[k] == -ep.mean_value[k]);
  }
}

TEST_CASE("margin valuation adjustment matches the closed form") {
  // Constant expected margin I, flat rate r, hazard l, spread 0:
  //   raw = -(1-R) l I (1 - e^{-(r+l) T}) / (r+l).
  const double r = 0.025, l = 0.0167, rec = 0.4, level = 1e6, horizon = 30.0;
  ZeroCurve base = ZeroCurve::flat(r);
  XvaParams xp;
  xp.lambda_b = l;
  xp.lambda_c = 0.0;
  xp.recovery_b = rec;
  ImProfile im = flat_im_profile(level, horizon);
  const double c = r + l;
  const double closed =
      -(1.0 - rec) * l * level * (1.0 - std::exp(-c * horizon)) / c;
  const double raw = compute_mva(im, xp, base);
  CHECK(raw < 0.0);
  CHECK(raw == doctest::Approx(closed).epsilon(1e-3));
  // semiannual trapezoid bias on e^{-cu} is (c dt)^2/12, far below 0.1%
  CHECK(std::fabs(raw - closed) < 1e-3 * std::fabs(closed));
}

TEST_CASE("margin adjustment refines stably with the grid") {
  const double r = 0.025, l = 0.0167, rec = 0.4;
  ZeroCurve base = ZeroCurve::flat(r);
  XvaParams xp;
  xp.lambda_b = l;
  xp.recovery_b = rec;
  // decaying profile exercises the quadrature beyond the constant case
  auto make_im = [&](double dt) {
    ImProfile im;
    for (double t = 0.0; t <= 30.0 + 1e-9; t += dt) {
      im.dates.push_back(t);
      im.expected_im.push_back(2e6 * std::exp(-0.05 * t));
    }
    return im;
  };
  const double coarse = compute_mva(make_im(0.5), xp, base);
  const double fine = compute_mva(make_im(0.25), xp, base);
  CHECK(std::fabs(coarse - fine) < 0.005 * std::fabs(fine));
}

TEST_CASE("structural zeros are exact") {
  ZeroCurve base = ramp_curve();
  ImProfile im = flat_im_profile(5e5, 10.0);

  XvaParams xp;
  xp.lambda_b = 0.0167;
  xp.recovery_b = 0.4;
  xp.im_spread = (1.0 - xp.recovery_b) * xp.lambda_b;  // cancels the carry
  CHECK(compute_mva(im, xp, base) == 0.0);

  XvaParams no_c;
  no_c.lambda_c = 0.0;
  ExposureProfiles ep;
  ep.dates = im.dates;
  ep.epe.assign(im.dates.size(), 1e6);
  ep.ene.assign(im.dates.size(), -2e5);
  ep.mean_value.assign(im.dates.size(), 8e5);
  CreditFunding cf = compute_credit_funding(ep, no_c, base);
  CHECK(cf.cva_raw == 0.0);
  CHECK(cf.colva_raw == 0.0);  // no margin profile

  ImProfile zero_im = flat_im_profile(0.0, 10.0);
  XvaParams carry;
  carry.lambda_b = 0.02;
  CHECK(compute_mva(zero_im, carry, base) == 0.0);
}

TEST_CASE("funding value is the sum of its legs and flips with the book") {
  ZeroCurve base = ramp_curve();
  PathGrid pg = sim_grid(base, 32, 10.0);
  Portfolio book = {
      {5e7, 0.019, 1.0, 9.5, true, 2},
      {2e7, 0.023, 1.1, 6.0, false, 2},
      {3e7, 0.02, 0.9, 3.0, true, 2},
  };
  XvaParams xp;
  xp.lambda_b = 0.0167;
  xp.lambda_c = 0.0167;
  xp.recovery_b = 0.4;
  xp.recovery_c = 0.4;

  ExposureProfiles ep = exposure_profiles(pg, book);
  ExposureProfiles em = exposure_profiles(pg, mirrored(book));
  CreditFunding cf = compute_credit_funding(ep, xp, base);
  CreditFunding cm = compute_credit_funding(em, xp, base);

  CHECK(cf.fva_raw == cf.fca_raw + cf.dva_raw);
  CHECK(cm.fva_raw == -cf.fva_raw);
  // equal hazards and recoveries swap the credit legs exactly
  CHECK(cm.cva_raw == -cf.dva_raw);
  CHECK(cm.dva_raw == -cf.cva_raw);
}

TEST_CASE("variation margin drives colva and validates its length") {
  const double r = 0.02, spread = 0.001, level = 5e5, horizon = 10.0;
  ZeroCurve base = ZeroCurve::flat(r);
  XvaParams xp;
  xp.lambda_b = 0.0;
  xp.lambda_c = 0.0;
  xp.colva_spread = spread;
  ExposureProfiles ep;
  ep.dates = SimGrid::semiannual(horizon);
  ep.epe.assign(ep.dates.size(), 0.0);
  ep.ene.assign(ep.dates.size(), 0.0);
  ep.mean_value.assign(ep.dates.size(), 0.0);
  xp.variation_margin.assign(ep.dates.size(), level);
  CreditFunding cf = compute_credit_funding(ep, xp, base);
  const double closed = -spread * level * (1.0 - std::exp(-r * horizon)) / r;
  CHECK(cf.colva_raw == doctest::Approx(closed).epsilon(1e-3));

  xp.variation_margin.pop_back();
  CHECK_THROWS_AS(compute_credit_funding(ep, xp, base), std::domain_error);
}

TEST_CASE("results report cost-convention values and basis points") {
  ZeroCurve base = ramp_curve();
  PathGrid pg = sim_grid(base, 16, 8.0);
  Portfolio book = {
      {6e7, 0.02, 1.0, 7.5, true, 2},
      {1e7, 0.022, 1.0, 4.0, false, 2},
  };
  ExposureProfiles ep = exposure_profiles(pg, book);
  // reuse the mean exposure as a stand-in margin profile
  ImProfile im;
  im.dates = ep.dates;
  im.expected_im.resize(ep.dates.size());
  for (std::size_t k = 0; k < ep.dates.size(); ++k) {
    im.expected_im[k] = ep.epe[k];
  }
  XvaParams xp;
  xp.lambda_b = 0.0167;
  xp.lambda_c = 0.008;
  const double gross = gross_notional(book);
  XvaResult r = make_xva_result(im, ep, xp, base, gross);

  CHECK(r.gross_notional == gross);
  CHECK(r.cva == -r.cva_raw);
  CHECK(r.dva == -r.dva_raw);
  CHECK(r.fca == -r.fca_raw);
  CHECK(r.colva == -r.colva_raw);
  CHECK(r.mva == -r.mva_raw);
  CHECK(r.fva == r.fca + r.dva);
  CHECK(r.fva == -r.fva_raw);
  CHECK(r.mva >= 0.0);
  CHECK(r.kva_bps == 0.0);
  const double to_bps = 1e4 / gross;
  CHECK(r.mva_bps == r.mva * to_bps);
  CHECK(r.cva_bps == r.cva * to_bps);

  XvaResult empty = make_xva_result(im, ep, xp, base, 0.0);
  CHECK(empty.mva_bps == 0.0);
  CHECK(empty.fva_bps == 0.0);
}

TEST_CASE("parameter validation rejects bad inputs") {
  XvaParams xp;
  xp.lambda_b = -0.01;
  CHECK_THROWS_AS(validate_xva(xp), std::domain_error);
  xp = XvaParams{};
  xp.recovery_c = 1.5;
  CHECK_THROWS_AS(validate_xva(xp), std::domain_error);
  xp = XvaParams{};
  xp.im_spread = std::nan("");
  CHECK_THROWS_AS(validate_xva(xp), std::domain_error);
  xp = XvaParams{};
  xp.variation_margin = {1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(validate_xva(xp), std::domain_error);
}
