#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mva/lsac.hpp"

namespace mva {

// Valuation-adjustment inputs. Hazard rates are flat, recoveries constant,
// rates deterministic (the base curve), so every adjustment is a
// one-dimensional integral of a discounted expected profile:
//
//   CVA   = -(1-R_C) int lambda_C D(u) EPE(u) du
//   DVA   = -(1-R_B) int lambda_B D(u) ENE(u) du
//   FCA   = -(1-R_B) int lambda_B D(u) EPE(u) du
//   FVA   = FCA + DVA (exactly)
//   COLVA = -s_X      int          D(u) X(u)   du
//   MVA   = -((1-R_B) lambda_B - s_I) int D(u) E[I(u)] du
//
// with D(u) = exp(-int_0^u (r + lambda_B + lambda_C)). Raw values carry
// these signs (negative = cost); reported values use the cost convention
// (cost = -raw, positive = cost to the issuer). The capital term is out of
// scope: the capital profile is identically zero, so KVA reports as 0.
struct XvaParams {
  double lambda_b = 0.0167;  // issuer hazard, 167bp
  double lambda_c = 0.0;     // counterparty hazard
  double recovery_b = 0.4;
  double recovery_c = 0.4;
  double im_spread = 0.0;    // s_I, spread earned on posted initial margin
  double colva_spread = 0.0;  // s_X, spread on variation margin
  std::vector<double> variation_margin;  // X(t_k); empty means identically 0
};

void validate_xva(const XvaParams& xp);

// D(u) under deterministic rates: int_0^u f(0,s) ds = u * y(0,u), so
// D(u) = exp(-(y(0,u) * u + (lambda_B + lambda_C) * u)). With both hazards
// zero this reduces to discount_factor(base, u) bitwise (same kernel).
double adjustment_discount(const XvaParams& xp, const ZeroCurve& base,
                           double u);

// Path-mean discounted-free exposure profiles by full revaluation of the
// book on each path's unshocked model curve. EPE >= 0 >= ENE pointwise;
// a mirrored book exactly swaps and negates them (IEEE equality).
struct ExposureProfiles {
  std::vector<double> dates;
  std::vector<double> epe;         // mean max(V, 0)
  std::vector<double> ene;         // mean min(V, 0)
  std::vector<double> mean_value;  // mean V
  std::size_t n_paths = 0;
};

ExposureProfiles exposure_profiles(const PathGrid& pg, const Portfolio& p);

// Trapezoidal quadrature over the stopping dates, left to right.
double trapezoid(std::span<const double> dates, std::span<const double> values);

// Raw (signed) MVA from an expected-IM profile. The coefficient
// (1-R_B) * lambda_B - s_I is factored once, so s_I set to exactly
// (1-R_B) * lambda_B yields exactly 0, as does an identically-zero profile.
double compute_mva(const ImProfile& im, const XvaParams& xp,
                   const ZeroCurve& base);

struct CreditFunding {
  double cva_raw = 0.0;
  double dva_raw = 0.0;
  double fca_raw = 0.0;
  double fva_raw = 0.0;  // fca_raw + dva_raw
  double colva_raw = 0.0;
};

CreditFunding compute_credit_funding(const ExposureProfiles& ep,
                                     const XvaParams& xp,
                                     const ZeroCurve& base);

struct XvaResult {
  double gross_notional = 0.0;
  // Cost convention (positive = cost). fva = fca + dva exactly.
  double cva = 0.0, dva = 0.0, fca = 0.0, fva = 0.0, colva = 0.0, mva = 0.0;
  // Raw signed integrals (negative = cost).
  double cva_raw = 0.0, dva_raw = 0.0, fca_raw = 0.0, fva_raw = 0.0,
         colva_raw = 0.0, mva_raw = 0.0;
  // 1e4 * cost / gross_notional; all 0 for an empty book.
  double cva_bps = 0.0, dva_bps = 0.0, fca_bps = 0.0, fva_bps = 0.0,
         colva_bps = 0.0, mva_bps = 0.0;
  double kva_bps = 0.0;  // capital profile identically zero
};

XvaResult make_xva_result(const ImProfile& im, const ExposureProfiles& ep,
                          const XvaParams& xp, const ZeroCurve& base,
                          double gross);

}  // namespace mva
