#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "instanet/errors.hpp"

namespace instanet {

enum class FitFamily { powerlaw, lognormal, exponential, poisson };

std::string_view to_string(FitFamily f);

struct FitResult {
    FitFamily family = FitFamily::powerlaw;
    // powerlaw
    double alpha = 0.0;
    double xmin = 0.0;
    // lognormal
    double mu = 0.0;
    double sigma = 0.0;
    // exponential
    double rate = 0.0;
    // poisson
    double mean = 0.0;

    double interval_lo = 0.0; // truncation actually applied
    double interval_hi = 0.0;
    double ks_statistic = 0.0;
    double p_value = 0.0;
    std::size_t sample_size = 0; // observations the parameters were fitted on
    std::uint32_t bootstrap_replicates = 0;
    std::uint64_t seed = 0;
};

struct BootstrapOptions {
    std::uint32_t replicates = 1000;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware
};

/// Discrete power-law fit: exact integer MLE for alpha, x_min selected by
/// scanning the distinct observed degrees (restricted to tails that keep at
/// least min_tail observations and two distinct values) for the minimum KS
/// distance. The p-value comes from a seeded semi-parametric bootstrap:
/// resamples draw below x_min from the empirical body and above from the
/// fitted law, and every resample is re-fitted the same way.
///
/// min_tail = 0 selects the default max(50, n/25). Tails much smaller than
/// that have no power against curved alternatives: the scan retreats into a
/// window every family fits, and the test stops rejecting anything.
FitResult fit_powerlaw(std::span<const double> sample, const BootstrapOptions& opts = {},
                       std::size_t min_tail = 0);

/// Lognormal fit on the sample truncated to [lo, hi]: MLE of mu/sigma on the
/// log values, KS against the interval-truncated law, p-value by parametric
/// bootstrap with the same truncation applied to every resample.
FitResult fit_lognormal(std::span<const double> sample, double lo, double hi,
                        const BootstrapOptions& opts = {});

/// Reference families: exponential (MLE rate) or poisson (MLE mean), with
/// parametric-bootstrap KS p-values.
FitResult fit_reference(std::span<const double> sample, FitFamily family,
                        const BootstrapOptions& opts = {});

struct CcdfPoint {
    double x;
    double p; // P(X >= x)
};

/// Exact empirical complementary CDF at the distinct sample values.
std::vector<CcdfPoint> ccdf(std::span<const double> sample);

/// CCDF of a fitted law at x, for plot curves (lognormal uses the truncated
/// form the fit was computed on).
double fitted_ccdf(const FitResult& fit, double x);

namespace detail {

/// Hurwitz zeta (and d/ds) for s > 1, a > 0 by Euler-Maclaurin with shift.
void hurwitz_zeta(double s, double a, double* z, double* dz);
double hurwitz_zeta(double s, double a);

} // namespace detail

} // namespace instanet
