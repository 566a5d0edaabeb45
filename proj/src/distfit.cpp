#include "instanet/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "instanet/parallel.hpp"
#include "instanet/rng.hpp"

namespace instanet {

std::string_view to_string(FitFamily f) {
    switch (f) {
        case FitFamily::powerlaw: return "powerlaw";
        case FitFamily::lognormal: return "lognormal";
        case FitFamily::exponential: return "exponential";
        default: return "poisson";
    }
}

namespace detail {

// Euler-Maclaurin with the series shifted out to b >= max(16, s): partial
// direct sum plus b^{1-s}/(s-1) + b^{-s}/2 + Bernoulli corrections. Relative
// error is far below 1e-14 in the (s, a) ranges used here.
void hurwitz_zeta(double s, double a, double* z, double* dz) {
    double partial = 0.0, dpartial = 0.0;
    double b = a;
    const double shift_to = std::max(16.0, s);
    while (b < shift_to) {
        const double t = std::pow(b, -s);
        partial += t;
        dpartial -= std::log(b) * t;
        b += 1.0;
    }
    const double lb = std::log(b);
    const double bpow = std::pow(b, -s); // b^-s
    const double b1 = bpow * b;          // b^(1-s)
    double zt = b1 / (s - 1.0) + 0.5 * bpow;
    double dzt = -lb * b1 / (s - 1.0) - b1 / ((s - 1.0) * (s - 1.0)) - 0.5 * lb * bpow;

    static const double bernoulli[7] = {1.0 / 6,  -1.0 / 30,       1.0 / 42, -1.0 / 30,
                                        5.0 / 66, -691.0 / 2730.0, 7.0 / 6};
    double rising = 1.0, drising = 0.0; // (s)_(2j-1) and d/ds
    int built = 0;
    double factorial = 1.0; // (2j)!
    int fact_upto = 0;
    const double inv_b2 = 1.0 / (b * b);
    double bpj = bpow / b; // b^(-s-2j+1), starting at j=1
    for (int j = 1; j <= 7; ++j) {
        while (built < 2 * j - 1) {
            drising = drising * (s + built) + rising;
            rising = rising * (s + built);
            ++built;
        }
        while (fact_upto < 2 * j) factorial *= ++fact_upto;
        const double c = bernoulli[j - 1] / factorial;
        zt += c * rising * bpj;
        dzt += c * bpj * (drising - rising * lb);
        bpj *= inv_b2;
    }
    *z = partial + zt;
    *dz = dpartial + dzt;
}

double hurwitz_zeta(double s, double a) {
    double z, dz;
    hurwitz_zeta(s, a, &z, &dz);
    return z;
}

} // namespace detail

namespace {

constexpr double kAlphaLo = 1.0 + 1e-7;
constexpr double kAlphaHi = 64.0;

// Root of g(alpha) = -n * zeta'/zeta - sum_log (strictly decreasing in
// alpha). Safeguarded secant within a sign-changing bracket; warm_start is
// the previous candidate's alpha, when available.
double powerlaw_alpha_mle(double xmin, double sum_log, double n, double warm_start) {
    auto g = [&](double alpha) {
        double z, dz;
        detail::hurwitz_zeta(alpha, xmin, &z, &dz);
        return -n * dz / z - sum_log;
    };
    double lo = kAlphaLo, hi = kAlphaHi;
    double glo = g(lo);
    if (glo <= 0.0) return lo;
    double ghi = g(hi);
    if (ghi >= 0.0) return hi;

    double x0 = lo, g0 = glo;
    double x1 = hi, g1 = ghi;
    if (warm_start > lo && warm_start < hi) {
        const double gw = g(warm_start);
        if (gw > 0.0) {
            x0 = warm_start;
            g0 = gw;
        } else {
            x1 = warm_start;
            g1 = gw;
        }
    }
    for (int it = 0; it < 200 && x1 - x0 > 1e-10; ++it) {
        double mid;
        if (g0 != g1) {
            mid = x1 - g1 * (x1 - x0) / (g1 - g0);
            if (!(mid > x0 + 1e-14 && mid < x1 - 1e-14)) mid = 0.5 * (x0 + x1);
        } else {
            mid = 0.5 * (x0 + x1);
        }
        const double gm = g(mid);
        if (gm > 0.0) {
            x0 = mid;
            g0 = gm;
        } else {
            x1 = mid;
            g1 = gm;
        }
    }
    return 0.5 * (x0 + x1);
}

// Distinct ascending values with suffix statistics of a sorted sample.
struct TailStats {
    std::vector<double> value;
    std::vector<std::size_t> suffix_n;    // observations >= value[t]
    std::vector<double> suffix_sum_log;   // sum of log over those
    std::vector<std::size_t> first_index; // position of value[t] in the sorted sample
};

TailStats tail_stats(const std::vector<double>& sorted) {
    TailStats ts;
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || sorted[i] != sorted[i - 1]) {
            ts.value.push_back(sorted[i]);
            ts.first_index.push_back(i);
        }
    }
    const std::size_t u = ts.value.size();
    ts.suffix_n.assign(u + 1, 0);
    ts.suffix_sum_log.assign(u + 1, 0.0);
    for (std::size_t t = u; t-- > 0;) {
        const std::size_t next_first = t + 1 < u ? ts.first_index[t + 1] : n;
        const std::size_t count = next_first - ts.first_index[t];
        ts.suffix_n[t] = ts.suffix_n[t + 1] + count;
        ts.suffix_sum_log[t] =
            ts.suffix_sum_log[t + 1] + static_cast<double>(count) * std::log(ts.value[t]);
    }
    return ts;
}

struct PowerlawScan {
    double alpha = 0.0;
    double xmin = 0.0;
    double ks = 0.0;
    std::size_t tail_n = 0;
    bool ok = false;
};

// KS distance between the tail's empirical CDF and the fitted discrete law,
// evaluated at every distinct tail value. Theoretical CDF values come from a
// downward zeta walk: consecutive-integer recurrence across small gaps,
// fresh Euler-Maclaurin evaluations across large ones.
double powerlaw_ks(const TailStats& ts, std::size_t t, double alpha, double z_total) {
    const std::size_t u = ts.value.size();
    const double tail_n = static_cast<double>(ts.suffix_n[t]);
    double d = 0.0;
    double zcur = 0.0;
    for (std::size_t j = u; j-- > t;) {
        if (j + 1 == u) {
            zcur = detail::hurwitz_zeta(alpha, ts.value[j] + 1.0);
        } else {
            const double gap = ts.value[j + 1] - ts.value[j];
            if (gap <= 32.0) {
                for (double k = ts.value[j] + 1.0; k <= ts.value[j + 1]; k += 1.0)
                    zcur += std::pow(k, -alpha);
            } else {
                zcur = detail::hurwitz_zeta(alpha, ts.value[j] + 1.0);
            }
        }
        const double f_th = 1.0 - zcur / z_total;
        const double f_emp = (tail_n - static_cast<double>(ts.suffix_n[j + 1])) / tail_n;
        d = std::max(d, std::abs(f_emp - f_th));
    }
    return d;
}

PowerlawScan powerlaw_scan(const TailStats& ts, std::size_t min_tail) {
    const std::size_t u = ts.value.size();
    PowerlawScan best;
    double warm = 0.0;
    for (std::size_t t = 0; t < u; ++t) {
        if (ts.suffix_n[t] < min_tail) break; // suffix sizes only shrink
        if (u - t < 2) break;                 // need two distinct tail values
        const double xmin = ts.value[t];
        const double alpha =
            powerlaw_alpha_mle(xmin, ts.suffix_sum_log[t], static_cast<double>(ts.suffix_n[t]), warm);
        warm = alpha;
        const double z_total = detail::hurwitz_zeta(alpha, xmin);
        const double ks = powerlaw_ks(ts, t, alpha, z_total);
        if (!best.ok || ks < best.ks) {
            best.ok = true;
            best.alpha = alpha;
            best.xmin = xmin;
            best.ks = ks;
            best.tail_n = ts.suffix_n[t];
        }
    }
    return best;
}

// Inverse-CDF sampler for the fitted discrete law: direct cumulative table,
// with a zeta-based search fallback for draws beyond its coverage.
class DiscretePowerlawSampler {
public:
    DiscretePowerlawSampler(double alpha, double xmin)
        : alpha_(alpha), xmin_(xmin), z_(detail::hurwitz_zeta(alpha, xmin)) {
        double acc = 0.0;
        const std::size_t cap = std::size_t{1} << 20;
        cum_.reserve(1 << 12);
        while (cum_.size() < cap) {
            const double k = xmin_ + static_cast<double>(cum_.size());
            acc += std::pow(k, -alpha_) / z_;
            cum_.push_back(acc);
            if (acc >= 1.0 - 1e-12) break;
        }
    }

    double draw(Rng& rng) const {
        const double un = rng.uniform();
        if (un <= cum_.back()) {
            const auto it = std::lower_bound(cum_.begin(), cum_.end(), un);
            return xmin_ + static_cast<double>(it - cum_.begin());
        }
        // Rare deep-tail draw: smallest v with F(v) >= u, by doubling then
        // bisecting on the zeta survival. Invariant: lo insufficient
        // (survival above target), hi sufficient.
        const double target = std::max(1.0 - un, 1e-300);
        std::uint64_t lo = static_cast<std::uint64_t>(xmin_) + cum_.size() - 1;
        std::uint64_t hi = 2 * lo;
        while (detail::hurwitz_zeta(alpha_, static_cast<double>(hi + 1)) / z_ > target &&
               hi < (std::uint64_t{1} << 50)) {
            lo = hi;
            hi *= 2;
        }
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (detail::hurwitz_zeta(alpha_, static_cast<double>(mid + 1)) / z_ > target)
                lo = mid;
            else
                hi = mid;
        }
        return static_cast<double>(hi);
    }

private:
    double alpha_, xmin_, z_;
    std::vector<double> cum_;
};

std::vector<double> sorted_copy(std::span<const double> sample) {
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    return s;
}

double bootstrap_pvalue(std::vector<double>& ks_rep, double ks_obs) {
    if (ks_rep.empty()) return std::numeric_limits<double>::quiet_NaN(); // bootstrap disabled
    std::size_t ge = 0;
    for (double k : ks_rep)
        if (k >= ks_obs) ++ge;
    return static_cast<double>(ge) / static_cast<double>(ks_rep.size());
}

} // namespace

FitResult fit_powerlaw(std::span<const double> sample, const BootstrapOptions& opts,
                       std::size_t min_tail) {
    if (sample.size() < 50)
        throw ArgumentError("fit_powerlaw: needs at least 50 observations, got " +
                            std::to_string(sample.size()));
    for (double v : sample) {
        if (v != std::floor(v) || v < 1.0)
            throw ValidationError("fit_powerlaw: degrees must be integers >= 1, got " +
                                  std::to_string(v));
    }
    const std::vector<double> sorted = sorted_copy(sample);
    if (sorted.front() == sorted.back())
        throw ValidationError("fit_powerlaw: fit degenerate, all degrees equal");

    const TailStats ts = tail_stats(sorted);
    if (min_tail == 0) min_tail = std::max<std::size_t>(50, sorted.size() / 25);
    const std::size_t effective_min_tail = std::min(min_tail, sorted.size());
    const PowerlawScan obs = powerlaw_scan(ts, effective_min_tail);
    if (!obs.ok) throw ValidationError("fit_powerlaw: fit degenerate, no admissible x_min");

    // Semi-parametric resampling: empirical body below x_min, fitted law above.
    std::vector<double> body;
    for (double v : sorted) {
        if (v < obs.xmin)
            body.push_back(v);
        else
            break;
    }
    const double p_tail =
        static_cast<double>(obs.tail_n) / static_cast<double>(sorted.size());
    const DiscretePowerlawSampler sampler(obs.alpha, obs.xmin);

    const std::size_t n = sorted.size();
    std::vector<double> ks_rep(opts.replicates);
    const Rng base(opts.seed);
    parallel_for(
        opts.replicates,
        [&](std::size_t r) {
            Rng rng = base.split(r);
            std::vector<double> resample(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (body.empty() || rng.uniform() < p_tail)
                    resample[i] = sampler.draw(rng);
                else
                    resample[i] = body[rng.below(body.size())];
            }
            std::sort(resample.begin(), resample.end());
            const TailStats rts = tail_stats(resample);
            const PowerlawScan rescan = powerlaw_scan(rts, effective_min_tail);
            ks_rep[r] = rescan.ok ? rescan.ks : 1.0;
        },
        opts.threads);

    FitResult fit;
    fit.family = FitFamily::powerlaw;
    fit.alpha = obs.alpha;
    fit.xmin = obs.xmin;
    fit.interval_lo = obs.xmin;
    fit.interval_hi = sorted.back();
    fit.ks_statistic = obs.ks;
    fit.p_value = bootstrap_pvalue(ks_rep, obs.ks);
    fit.sample_size = obs.tail_n;
    fit.bootstrap_replicates = opts.replicates;
    fit.seed = opts.seed;
    return fit;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730950488); }

double continuous_ks(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Discrete KS: compare right-inclusive empirical and theoretical CDFs at the
// distinct observed values.
double discrete_ks(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf(sorted[i])));
    }
    return d;
}

struct TruncatedLognormal {
    double mu, sigma, lo, hi, phi_lo, phi_hi;

    TruncatedLognormal(double mu_, double sigma_, double lo_, double hi_)
        : mu(mu_), sigma(sigma_), lo(lo_), hi(hi_) {
        phi_lo = normal_cdf((std::log(lo) - mu) / sigma);
        phi_hi = normal_cdf((std::log(hi) - mu) / sigma);
    }

    double cdf(double x) const {
        const double p = normal_cdf((std::log(x) - mu) / sigma);
        return (p - phi_lo) / (phi_hi - phi_lo);
    }

    double quantile(Rng& rng) const {
        static const boost::math::normal_distribution<double> unit;
        const double u = phi_lo + rng.uniform() * (phi_hi - phi_lo);
        const double z = boost::math::quantile(unit, std::min(1.0 - 1e-16, std::max(1e-16, u)));
        return std::exp(mu + sigma * z);
    }
};

// Sufficient statistics of the log values; the truncated likelihood depends
// on the sample only through these, so each evaluation is O(1).
struct LogStats {
    double n = 0, sum = 0, sum2 = 0;
};

LogStats log_stats(const std::vector<double>& xs) {
    LogStats s;
    s.n = static_cast<double>(xs.size());
    for (double x : xs) {
        const double l = std::log(x);
        s.sum += l;
        s.sum2 += l * l;
    }
    return s;
}

double truncated_nll(double mu, double sigma, const LogStats& s, double ln_lo, double ln_hi) {
    if (sigma <= 0.0) return 1e300;
    const double mass = normal_cdf((ln_hi - mu) / sigma) - normal_cdf((ln_lo - mu) / sigma);
    if (mass <= 1e-300) return 1e300;
    const double quad = (s.sum2 - 2.0 * mu * s.sum + s.n * mu * mu) / (2.0 * sigma * sigma);
    return s.n * std::log(sigma) + quad + s.n * std::log(mass);
}

// MLE of the interval-truncated lognormal: Nelder-Mead on (mu, log sigma),
// started from the plain log moments. Plain moments are biased when the
// interval cuts real mass, which would break the bootstrap's calibration.
std::pair<double, double> truncated_log_mle(const LogStats& s, double lo, double hi) {
    const double ln_lo = std::log(lo), ln_hi = std::log(hi);
    const double mean = s.sum / s.n;
    const double var = std::max(1e-12, s.sum2 / s.n - mean * mean);
    double p0[2] = {mean, 0.5 * std::log(var)};

    auto f = [&](const double* p) {
        return truncated_nll(p[0], std::exp(p[1]), s, ln_lo, ln_hi);
    };
    double simplex[3][2] = {{p0[0], p0[1]}, {p0[0] + 0.1, p0[1]}, {p0[0], p0[1] + 0.1}};
    double value[3] = {f(simplex[0]), f(simplex[1]), f(simplex[2])};
    for (int iter = 0; iter < 400; ++iter) {
        int lo_i = 0, hi_i = 0, mid_i = 0;
        for (int i = 1; i < 3; ++i) {
            if (value[i] < value[lo_i]) lo_i = i;
            if (value[i] > value[hi_i]) hi_i = i;
        }
        for (int i = 0; i < 3; ++i)
            if (i != lo_i && i != hi_i) mid_i = i;
        if (std::abs(value[hi_i] - value[lo_i]) < 1e-12) break;
        double centroid[2] = {0.5 * (simplex[lo_i][0] + simplex[mid_i][0]),
                              0.5 * (simplex[lo_i][1] + simplex[mid_i][1])};
        double reflect[2] = {2 * centroid[0] - simplex[hi_i][0],
                             2 * centroid[1] - simplex[hi_i][1]};
        const double fr = f(reflect);
        if (fr < value[lo_i]) {
            double expand[2] = {centroid[0] + 2 * (reflect[0] - centroid[0]),
                                centroid[1] + 2 * (reflect[1] - centroid[1])};
            const double fe = f(expand);
            if (fe < fr) {
                simplex[hi_i][0] = expand[0];
                simplex[hi_i][1] = expand[1];
                value[hi_i] = fe;
            } else {
                simplex[hi_i][0] = reflect[0];
                simplex[hi_i][1] = reflect[1];
                value[hi_i] = fr;
            }
        } else if (fr < value[mid_i]) {
            simplex[hi_i][0] = reflect[0];
            simplex[hi_i][1] = reflect[1];
            value[hi_i] = fr;
        } else {
            double contract[2] = {0.5 * (centroid[0] + simplex[hi_i][0]),
                                  0.5 * (centroid[1] + simplex[hi_i][1])};
            const double fc = f(contract);
            if (fc < value[hi_i]) {
                simplex[hi_i][0] = contract[0];
                simplex[hi_i][1] = contract[1];
                value[hi_i] = fc;
            } else {
                for (int i = 0; i < 3; ++i) {
                    if (i == lo_i) continue;
                    simplex[i][0] = 0.5 * (simplex[i][0] + simplex[lo_i][0]);
                    simplex[i][1] = 0.5 * (simplex[i][1] + simplex[lo_i][1]);
                    value[i] = f(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (value[i] < value[best]) best = i;
    return {simplex[best][0], std::exp(simplex[best][1])};
}

} // namespace

FitResult fit_lognormal(std::span<const double> sample, double lo, double hi,
                        const BootstrapOptions& opts) {
    if (!(lo > 0.0) || !(hi >= lo))
        throw ArgumentError("fit_lognormal: interval must satisfy 0 < lo <= hi");
    std::vector<double> xs;
    for (double v : sample) {
        if (v >= lo && v <= hi) xs.push_back(v);
    }
    if (xs.empty()) throw ArgumentError("fit_lognormal: interval excludes all data");
    if (xs.size() < 50)
        throw ArgumentError("fit_lognormal: needs at least 50 observations within the interval, got " +
                            std::to_string(xs.size()));
    std::sort(xs.begin(), xs.end());
    if (xs.front() == xs.back())
        throw ValidationError("fit_lognormal: fit degenerate, all values equal within interval");

    const auto [mu, sigma] = truncated_log_mle(log_stats(xs), lo, hi);
    const TruncatedLognormal law(mu, sigma, lo, hi);
    const double ks_obs = continuous_ks(xs, [&](double x) { return law.cdf(x); });

    const std::size_t n = xs.size();
    std::vector<double> ks_rep(opts.replicates);
    const Rng base(opts.seed);
    parallel_for(
        opts.replicates,
        [&](std::size_t r) {
            Rng rng = base.split(r);
            std::vector<double> resample(n);
            for (auto& x : resample) x = law.quantile(rng);
            std::sort(resample.begin(), resample.end());
            const auto [rmu, rsigma] = truncated_log_mle(log_stats(resample), lo, hi);
            if (rsigma <= 0.0) {
                ks_rep[r] = 1.0;
                return;
            }
            const TruncatedLognormal rlaw(rmu, rsigma, lo, hi);
            ks_rep[r] = continuous_ks(resample, [&](double x) { return rlaw.cdf(x); });
        },
        opts.threads);

    FitResult fit;
    fit.family = FitFamily::lognormal;
    fit.mu = mu;
    fit.sigma = sigma;
    fit.interval_lo = lo;
    fit.interval_hi = hi;
    fit.ks_statistic = ks_obs;
    fit.p_value = bootstrap_pvalue(ks_rep, ks_obs);
    fit.sample_size = n;
    fit.bootstrap_replicates = opts.replicates;
    fit.seed = opts.seed;
    return fit;
}

namespace {

// Poisson CDF table out to where the survival is negligible.
std::vector<double> poisson_cdf_table(double mean, double max_value) {
    const std::size_t cap =
        static_cast<std::size_t>(std::max(max_value, mean + 12.0 * std::sqrt(mean) + 30.0)) + 1;
    std::vector<double> cdf(cap + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k <= cap; ++k) {
        const double kd = static_cast<double>(k);
        acc += std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
        cdf[k] = std::min(acc, 1.0);
    }
    return cdf;
}

} // namespace

FitResult fit_reference(std::span<const double> sample, FitFamily family,
                        const BootstrapOptions& opts) {
    if (family != FitFamily::exponential && family != FitFamily::poisson)
        throw ArgumentError("fit_reference: family must be exponential or poisson");
    if (sample.size() < 2) throw ArgumentError("fit_reference: empty or singleton sample");
    std::vector<double> xs = sorted_copy(sample);
    if (xs.front() == xs.back())
        throw ValidationError("fit_reference: fit degenerate, all values equal");

    FitResult fit;
    fit.family = family;
    fit.interval_lo = xs.front();
    fit.interval_hi = xs.back();
    fit.sample_size = xs.size();
    fit.bootstrap_replicates = opts.replicates;
    fit.seed = opts.seed;

    const std::size_t n = xs.size();
    std::vector<double> ks_rep(opts.replicates);
    const Rng base(opts.seed);

    if (family == FitFamily::exponential) {
        for (double v : xs)
            if (v < 0.0) throw ValidationError("fit_reference: exponential requires non-negative values");
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
        if (mean <= 0.0) throw ValidationError("fit_reference: fit degenerate, zero mean");
        const double rate = 1.0 / mean;
        const double ks_obs =
            continuous_ks(xs, [&](double x) { return -std::expm1(-rate * x); });
        parallel_for(
            opts.replicates,
            [&](std::size_t r) {
                Rng rng = base.split(r);
                std::vector<double> resample(n);
                for (auto& x : resample) x = rng.exponential(rate);
                std::sort(resample.begin(), resample.end());
                double rmean = std::accumulate(resample.begin(), resample.end(), 0.0) /
                               static_cast<double>(n);
                const double rrate = 1.0 / rmean;
                ks_rep[r] =
                    continuous_ks(resample, [&](double x) { return -std::expm1(-rrate * x); });
            },
            opts.threads);
        fit.rate = rate;
        fit.ks_statistic = ks_obs;
        fit.p_value = bootstrap_pvalue(ks_rep, ks_obs);
        return fit;
    }

    for (double v : xs) {
        if (v != std::floor(v) || v < 0.0)
            throw ValidationError("fit_reference: poisson requires non-negative integer values");
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    if (mean <= 0.0) throw ValidationError("fit_reference: fit degenerate, zero mean");
    const std::vector<double> cdf = poisson_cdf_table(mean, xs.back());
    auto cdf_at = [](const std::vector<double>& table, double x) {
        const auto k = static_cast<std::size_t>(x);
        return k < table.size() ? table[k] : 1.0;
    };
    const double ks_obs = discrete_ks(xs, [&](double x) { return cdf_at(cdf, x); });

    parallel_for(
        opts.replicates,
        [&](std::size_t r) {
            Rng rng = base.split(r);
            std::vector<double> resample(n);
            for (auto& x : resample) {
                // Inverse CDF through the fitted table (extended if a draw
                // lands past it, which the +12 sigma margin makes unseen).
                const double u = rng.uniform();
                const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
                x = static_cast<double>(it == cdf.end() ? cdf.size() - 1
                                                        : static_cast<std::size_t>(it - cdf.begin()));
            }
            std::sort(resample.begin(), resample.end());
            const double rmean = std::accumulate(resample.begin(), resample.end(), 0.0) /
                                 static_cast<double>(n);
            if (rmean <= 0.0) {
                ks_rep[r] = 1.0;
                return;
            }
            const std::vector<double> rcdf = poisson_cdf_table(rmean, resample.back());
            ks_rep[r] = discrete_ks(resample, [&](double x) { return cdf_at(rcdf, x); });
        },
        opts.threads);
    fit.mean = mean;
    fit.ks_statistic = ks_obs;
    fit.p_value = bootstrap_pvalue(ks_rep, ks_obs);
    return fit;
}

std::vector<CcdfPoint> ccdf(std::span<const double> sample) {
    if (sample.empty()) throw ArgumentError("ccdf: empty sample");
    const std::vector<double> sorted = sorted_copy(sample);
    const double n = static_cast<double>(sorted.size());
    std::vector<CcdfPoint> points;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i] != sorted[i - 1])
            points.push_back({sorted[i], (n - static_cast<double>(i)) / n});
    }
    return points;
}

double fitted_ccdf(const FitResult& fit, double x) {
    switch (fit.family) {
        case FitFamily::powerlaw: {
            if (x <= fit.xmin) return 1.0;
            const double v = std::ceil(x);
            return detail::hurwitz_zeta(fit.alpha, v) / detail::hurwitz_zeta(fit.alpha, fit.xmin);
        }
        case FitFamily::lognormal: {
            if (x <= fit.interval_lo) return 1.0;
            if (x > fit.interval_hi) return 0.0;
            const TruncatedLognormal law(fit.mu, fit.sigma, fit.interval_lo, fit.interval_hi);
            return 1.0 - law.cdf(x);
        }
        case FitFamily::exponential:
            return x <= 0.0 ? 1.0 : std::exp(-fit.rate * x);
        default: {
            if (x <= 0.0) return 1.0;
            const double v = std::ceil(x);
            const std::vector<double> cdf = poisson_cdf_table(fit.mean, v);
            const auto k = static_cast<std::size_t>(v);
            return 1.0 - (k >= 1 && k - 1 < cdf.size() ? cdf[k - 1] : 1.0);
        }
    }
}

} // namespace instanet
