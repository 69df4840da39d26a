#include "cflp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "text.hpp"

namespace cflp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double base_cdf(BaseLaw law, double x)
{
    switch (law) {
    case BaseLaw::Uniform: return std::clamp(x, 0.0, 1.0);
    case BaseLaw::Normal: return normal_cdf(x);
    case BaseLaw::Exponential: return x <= 0 ? 0.0 : -std::expm1(-x);
    case BaseLaw::Beta31: {
        double c = std::clamp(x, 0.0, 1.0);
        return c * c * c;
    }
    }
    return 0;
}

double base_pdf(BaseLaw law, double x)
{
    switch (law) {
    case BaseLaw::Uniform: return (x >= 0 && x <= 1) ? 1.0 : 0.0;
    case BaseLaw::Normal: return normal_pdf(x);
    case BaseLaw::Exponential: return x < 0 ? 0.0 : std::exp(-x);
    case BaseLaw::Beta31: return (x >= 0 && x <= 1) ? 3.0 * x * x : 0.0;
    }
    return 0;
}

double base_quantile(BaseLaw law, double u)
{
    switch (law) {
    case BaseLaw::Uniform: return u;
    case BaseLaw::Normal: return normal_quantile(u);
    case BaseLaw::Exponential: return u >= 1 ? kInf : -std::log1p(-u);
    case BaseLaw::Beta31: return std::cbrt(u);
    }
    return 0;
}

std::pair<double, double> base_support(BaseLaw law)
{
    switch (law) {
    case BaseLaw::Uniform: return {0.0, 1.0};
    case BaseLaw::Normal: return {-kInf, kInf};
    case BaseLaw::Exponential: return {0.0, kInf};
    case BaseLaw::Beta31: return {0.0, 1.0};
    }
    return {0, 0};
}

double base_moment(BaseLaw law, int k, double t)
{
    if (k == 0)
        return base_cdf(law, t);
    switch (law) {
    case BaseLaw::Uniform: {
        double c = std::clamp(t, 0.0, 1.0);
        return k == 1 ? c * c / 2.0 : c * c * c / 3.0;
    }
    case BaseLaw::Normal:
        if (t == -kInf)
            return 0.0;
        if (t == kInf)
            return k == 1 ? 0.0 : 1.0;
        return k == 1 ? -normal_pdf(t) : normal_cdf(t) - t * normal_pdf(t);
    case BaseLaw::Exponential:
        if (t <= 0)
            return 0.0;
        if (t == kInf)
            return k == 1 ? 1.0 : 2.0;
        return k == 1 ? -std::expm1(-t) - t * std::exp(-t) : 2.0 - std::exp(-t) * (t * t + 2.0 * t + 2.0);
    case BaseLaw::Beta31: {
        double c = std::clamp(t, 0.0, 1.0);
        double c4 = c * c * c * c;
        return k == 1 ? 0.75 * c4 : 0.6 * c4 * c;
    }
    }
    return 0;
}

const char* base_name(BaseLaw law)
{
    switch (law) {
    case BaseLaw::Uniform: return "uniform";
    case BaseLaw::Normal: return "normal";
    case BaseLaw::Exponential: return "exp";
    case BaseLaw::Beta31: return "beta31";
    }
    return "";
}

}  // namespace

double normal_pdf(double x)
{
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double u)
{
    if (u <= 0)
        return -kInf;
    if (u >= 1)
        return kInf;
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (u < plow) {
        double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        double q = u - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against the erfc-based cdf, on the tail nearer to u
    for (int it = 0; it < 2; ++it) {
        double e = u <= 0.5 ? normal_cdf(x) - u : (1.0 - u) - 0.5 * std::erfc(x / std::sqrt(2.0));
        double step = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
        x -= step / (1.0 + 0.5 * x * step);
    }
    return x;
}

DistributionModel DistributionModel::builtin(std::string_view name)
{
    name = text::trim(name);
    if (name == "uniform01" || name == "uniform")
        return {BaseLaw::Uniform, 1.0, 0.0};
    if (name == "normal01" || name == "normal")
        return {BaseLaw::Normal, 1.0, 0.0};
    if (name == "exp1" || name == "exp")
        return {BaseLaw::Exponential, 1.0, 0.0};
    if (name == "beta31")
        return {BaseLaw::Beta31, 1.0, 0.0};
    fail(ErrorKind::InvalidArgument, "unknown distribution '" + std::string(name) + "'");
}

DistributionModel DistributionModel::parse(std::string_view spec)
{
    spec = text::trim(spec);
    auto at = spec.find('@');
    if (at == std::string_view::npos)
        return builtin(spec);
    auto base = builtin(spec.substr(0, at));
    auto params = text::parse_doubles(spec.substr(at + 1));
    require(params.size() == 2, ErrorKind::InvalidArgument, "affine suffix must be @alpha,beta");
    return base.affine(params[0], params[1]);
}

DistributionModel DistributionModel::affine(double alpha, double beta) const
{
    require(alpha > 0 && std::isfinite(alpha), ErrorKind::InvalidArgument, "affine scale must be positive");
    require(std::isfinite(beta), ErrorKind::InvalidArgument, "affine shift must be finite");
    return {law_, alpha * alpha_, alpha * beta_ + beta};
}

double DistributionModel::cdf(double x) const
{
    return base_cdf(law_, (x - beta_) / alpha_);
}

double DistributionModel::quantile(double u) const
{
    require(u >= 0 && u <= 1, ErrorKind::InvalidArgument, "quantile level outside [0,1]");
    if (u == 0)
        return support().first;
    if (u == 1)
        return support().second;
    return alpha_ * base_quantile(law_, u) + beta_;
}

double DistributionModel::pdf(double x) const
{
    return base_pdf(law_, (x - beta_) / alpha_) / alpha_;
}

std::pair<double, double> DistributionModel::support() const
{
    auto [lo, hi] = base_support(law_);
    return {alpha_ * lo + beta_, alpha_ * hi + beta_};
}

bool DistributionModel::compact() const
{
    auto [lo, hi] = support();
    return std::isfinite(lo) && std::isfinite(hi);
}

double DistributionModel::mean() const
{
    return alpha_ * base_moment(law_, 1, kInf) + beta_;
}

double DistributionModel::median() const
{
    return quantile(0.5);
}

double DistributionModel::partial_moment(int k, double t) const
{
    require(k >= 0 && k <= 2, ErrorKind::InvalidArgument, "partial moments available for k = 0, 1, 2");
    double s = (t - beta_) / alpha_;
    double m0 = base_moment(law_, 0, s);
    if (k == 0)
        return m0;
    double m1 = base_moment(law_, 1, s);
    if (k == 1)
        return alpha_ * m1 + beta_ * m0;
    double m2 = base_moment(law_, 2, s);
    return alpha_ * alpha_ * m2 + 2.0 * alpha_ * beta_ * m1 + beta_ * beta_ * m0;
}

std::string DistributionModel::name() const
{
    std::string s = base_name(law_);
    if (alpha_ != 1.0 || beta_ != 0.0)
        s += "@" + text::fmt(alpha_) + "," + text::fmt(beta_);
    return s;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t h = splitmix64(splitmix64(seed) + index);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    return splitmix64(h ^ (b * 0xd1b54a32d192ed03ULL));
}

std::vector<double> sample_values(const DistributionModel& model, std::size_t n, std::uint64_t seed)
{
    require(n >= 1, ErrorKind::InvalidArgument, "sample size must be positive");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = model.quantile(counter_uniform(seed, i));
    std::sort(x.begin(), x.end());
    return x;
}

AgentProfile sample(const DistributionModel& model, std::size_t n, std::uint64_t seed)
{
    return AgentProfile(sample_values(model, n, seed));
}

}  // namespace cflp
