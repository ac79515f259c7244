#include "mva/xva.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mva/kernels.hpp"
#include "mva/parallel.hpp"

namespace mva {

void validate_xva(const XvaParams& xp) {
  if (!(std::isfinite(xp.lambda_b) && xp.lambda_b >= 0.0) ||
      !(std::isfinite(xp.lambda_c) && xp.lambda_c >= 0.0)) {
    throw std::domain_error("xva: hazard rates must be >= 0");
  }
  if (!(xp.recovery_b >= 0.0 && xp.recovery_b <= 1.0) ||
      !(xp.recovery_c >= 0.0 && xp.recovery_c <= 1.0)) {
    throw std::domain_error("xva: recoveries must lie in [0, 1]");
  }
  if (!std::isfinite(xp.im_spread) || !std::isfinite(xp.colva_spread)) {
    throw std::domain_error("xva: spreads must be finite");
  }
  for (double x : xp.variation_margin) {
    if (!std::isfinite(x)) throw std::domain_error("xva: margin profile not finite");
  }
}

double adjustment_discount(const XvaParams& xp, const ZeroCurve& base,
                           double u) {
  if (!(u >= 0.0)) throw std::domain_error("adjustment_discount: u must be >= 0");
  const double y = interp_zero(base, u);
  const double arg = -(y * u + (xp.lambda_b + xp.lambda_c) * u);
  double out;
  kernels::active().vexp(&arg, &out, 1);
  return out;
}

ExposureProfiles exposure_profiles(const PathGrid& pg, const Portfolio& p) {
  const std::size_t P = pg.n_paths();
  const std::size_t K = pg.n_dates();

  std::vector<double> values(P * K);
  parallel_for(P, [&](std::size_t path) {
    for (std::size_t k = 0; k < K; ++k) {
      values[path * K + k] =
          price_portfolio(pg.curve_at(path, k), pg.date(k), p);
    }
  });

  ExposureProfiles ep;
  ep.dates = pg.dates();
  ep.n_paths = P;
  ep.epe.assign(K, 0.0);
  ep.ene.assign(K, 0.0);
  ep.mean_value.assign(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double pos = 0.0, neg = 0.0, mean = 0.0;
    for (std::size_t path = 0; path < P; ++path) {
      const double v = values[path * K + k];
      pos += v > 0.0 ? v : 0.0;
      neg += v < 0.0 ? v : 0.0;
      mean += v;
    }
    const double inv = 1.0 / static_cast<double>(P);
    ep.epe[k] = pos * inv;
    ep.ene[k] = neg * inv;
    ep.mean_value[k] = mean * inv;
  }
  return ep;
}

double trapezoid(std::span<const double> dates, std::span<const double> values) {
  if (dates.size() != values.size()) {
    throw std::domain_error("trapezoid: size mismatch");
  }
  double acc = 0.0;
  for (std::size_t k = 1; k < dates.size(); ++k) {
    acc += 0.5 * (values[k - 1] + values[k]) * (dates[k] - dates[k - 1]);
  }
  return acc;
}

namespace {

std::vector<double> discount_profile(const XvaParams& xp, const ZeroCurve& base,
                                     std::span<const double> dates) {
  std::vector<double> d(dates.size());
  for (std::size_t k = 0; k < dates.size(); ++k) {
    d[k] = adjustment_discount(xp, base, dates[k]);
  }
  return d;
}

double weighted_integral(std::span<const double> dates,
                         std::span<const double> disc,
                         std::span<const double> profile) {
  std::vector<double> integrand(dates.size());
  for (std::size_t k = 0; k < dates.size(); ++k) {
    integrand[k] = disc[k] * profile[k];
  }
  return trapezoid(dates, integrand);
}

}  // namespace

double compute_mva(const ImProfile& im, const XvaParams& xp,
                   const ZeroCurve& base) {
  validate_xva(xp);
  const double coef = (1.0 - xp.recovery_b) * xp.lambda_b - xp.im_spread;
  const auto disc = discount_profile(xp, base, im.dates);
  return -(coef * weighted_integral(im.dates, disc, im.expected_im));
}

CreditFunding compute_credit_funding(const ExposureProfiles& ep,
                                     const XvaParams& xp,
                                     const ZeroCurve& base) {
  validate_xva(xp);
  if (!xp.variation_margin.empty() &&
      xp.variation_margin.size() != ep.dates.size()) {
    throw std::domain_error("xva: margin profile must match the date grid");
  }
  const auto disc = discount_profile(xp, base, ep.dates);

  CreditFunding out;
  out.cva_raw = -((1.0 - xp.recovery_c) * xp.lambda_c *
                  weighted_integral(ep.dates, disc, ep.epe));
  out.dva_raw = -((1.0 - xp.recovery_b) * xp.lambda_b *
                  weighted_integral(ep.dates, disc, ep.ene));
  out.fca_raw = -((1.0 - xp.recovery_b) * xp.lambda_b *
                  weighted_integral(ep.dates, disc, ep.epe));
  out.fva_raw = out.fca_raw + out.dva_raw;
  out.colva_raw =
      xp.variation_margin.empty()
          ? 0.0
          : -(xp.colva_spread *
              weighted_integral(ep.dates, disc, xp.variation_margin));
  return out;
}

XvaResult make_xva_result(const ImProfile& im, const ExposureProfiles& ep,
                          const XvaParams& xp, const ZeroCurve& base,
                          double gross) {
  XvaResult r;
  r.gross_notional = gross;
  const CreditFunding cf = compute_credit_funding(ep, xp, base);
  r.cva_raw = cf.cva_raw;
  r.dva_raw = cf.dva_raw;
  r.fca_raw = cf.fca_raw;
  r.fva_raw = cf.fva_raw;
  r.colva_raw = cf.colva_raw;
  r.mva_raw = compute_mva(im, xp, base);

  r.cva = -r.cva_raw;
  r.dva = -r.dva_raw;
  r.fca = -r.fca_raw;
  r.fva = r.fca + r.dva;  // equals -(fva_raw) exactly
  r.colva = -r.colva_raw;
  r.mva = -r.mva_raw;

  const double to_bps = gross > 0.0 ? 1e4 / gross : 0.0;
  r.cva_bps = r.cva * to_bps;
  r.dva_bps = r.dva * to_bps;
  r.fca_bps = r.fca * to_bps;
  r.fva_bps = r.fva * to_bps;
  r.colva_bps = r.colva * to_bps;
  r.mva_bps = r.mva * to_bps;
  return r;
}

}  // namespace mva
