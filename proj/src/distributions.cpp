#include "esslab/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace esslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("shape parameter must be a positive real");
  }
  return alpha;
}

}  // namespace

DistributionSpec DistributionSpec::exponential() { return {Family::exponential, 0.0, false}; }
DistributionSpec DistributionSpec::normal() { return {Family::normal, 0.0, false}; }
DistributionSpec DistributionSpec::uniform() { return {Family::uniform, 0.0, false}; }
DistributionSpec DistributionSpec::weibull(double alpha) {
  return {Family::weibull, require_alpha(alpha), false};
}
DistributionSpec DistributionSpec::pareto(double alpha) {
  return {Family::pareto, require_alpha(alpha), false};
}
DistributionSpec DistributionSpec::cauchy() { return {Family::cauchy, 0.0, false}; }
DistributionSpec DistributionSpec::lognormal() { return {Family::lognormal, 0.0, false}; }
DistributionSpec DistributionSpec::logistic() { return {Family::logistic, 0.0, false}; }
DistributionSpec DistributionSpec::expexp() { return {Family::expexp, 0.0, false}; }

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

double standard_normal_quantile(double p) {
  // Acklam's rational approximation, then one Halley step against erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  double e = standard_normal_cdf(x) - p;
  double u = e * 2.50662827463100050242 * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double DistributionSpec::base_cdf(double x) const {
  switch (family_) {
    case Family::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-x);
    case Family::normal:
      return standard_normal_cdf(x);
    case Family::uniform:
      return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x);
    case Family::weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, shape_));
    case Family::pareto:
      return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -shape_);
    case Family::cauchy:
      return 0.5 + std::atan(x) / kPi;
    case Family::lognormal:
      return x <= 0.0 ? 0.0 : standard_normal_cdf(std::log(x));
    case Family::logistic:
      return 1.0 / (1.0 + std::exp(-x));
    case Family::expexp:
      return -std::expm1(-std::exp(x));
  }
  return 0.0;  // unreachable
}

double DistributionSpec::base_quantile(double p) const {
  switch (family_) {
    case Family::exponential:
      return -std::log1p(-p);
    case Family::normal:
      return standard_normal_quantile(p);
    case Family::uniform:
      return p;
    case Family::weibull:
      return std::pow(-std::log1p(-p), 1.0 / shape_);
    case Family::pareto:
      return std::pow(1.0 - p, -1.0 / shape_);
    case Family::cauchy:
      return std::tan(kPi * (p - 0.5));
    case Family::lognormal:
      return std::exp(standard_normal_quantile(p));
    case Family::logistic:
      return std::log(p) - std::log1p(-p);
    case Family::expexp:
      return std::log(-std::log1p(-p));
  }
  return 0.0;  // unreachable
}

double DistributionSpec::cdf(double x) const {
  if (!symmetrized_) return base_cdf(x);
  // Random sign times a base draw: half the mass mirrored onto x < 0.
  if (x >= 0.0) return 0.5 + 0.5 * base_cdf(x);
  return 0.5 * (1.0 - base_cdf(-x));
}

double DistributionSpec::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("quantile requires p in (0,1)");
  }
  if (!symmetrized_) return base_quantile(p);
  if (p > 0.5) return base_quantile(2.0 * p - 1.0);
  if (p < 0.5) return -base_quantile(1.0 - 2.0 * p);
  return 0.0;
}

double DistributionSpec::cumulative_hazard(double x) const {
  double s = survival(x);
  if (!(s > 0.0)) {
    throw std::domain_error("cumulative_hazard undefined where survival is zero");
  }
  return s >= 1.0 ? 0.0 : -std::log(s);
}

double DistributionSpec::support_lo() const {
  if (symmetrized_) return -support_hi();
  switch (family_) {
    case Family::exponential:
    case Family::weibull:
    case Family::lognormal:
    case Family::uniform:
      return 0.0;
    case Family::pareto:
      return 1.0;
    default:
      return -kInf;
  }
}

double DistributionSpec::support_hi() const {
  if (family_ == Family::uniform) return 1.0;
  return kInf;
}

TailClass DistributionSpec::tail_class() const {
  switch (family_) {
    case Family::exponential:
    case Family::normal:
    case Family::uniform:
    case Family::logistic:
    case Family::expexp:
      return TailClass::EF;
    case Family::weibull:
      return shape_ >= 1.0 ? TailClass::EF : TailClass::SE;
    case Family::pareto:
    case Family::cauchy:
    case Family::lognormal:
      return TailClass::SE;
  }
  return TailClass::unclassified;
}

bool DistributionSpec::is_symmetric() const {
  if (symmetrized_) return true;
  switch (family_) {
    case Family::normal:
    case Family::cauchy:
    case Family::logistic:
    case Family::uniform:  // symmetric about 1/2
      return true;
    default:
      return false;
  }
}

DistributionSpec DistributionSpec::symmetrize() const {
  if (symmetrized_) {
    throw std::invalid_argument("distribution is already symmetrized");
  }
  switch (family_) {
    case Family::normal:
    case Family::cauchy:
    case Family::logistic:
    case Family::expexp:
      throw std::invalid_argument(
          "cannot symmetrize a two-sided family: " + name());
    default:
      break;
  }
  return {family_, shape_, true};
}

std::string DistributionSpec::name() const {
  std::string base;
  switch (family_) {
    case Family::exponential: base = "exp"; break;
    case Family::normal: base = "normal"; break;
    case Family::uniform: base = "uniform"; break;
    case Family::weibull:
    case Family::pareto: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%s:%.17g",
                    family_ == Family::weibull ? "weibull" : "pareto", shape_);
      base = buf;
      break;
    }
    case Family::cauchy: base = "cauchy"; break;
    case Family::lognormal: base = "lognormal"; break;
    case Family::logistic: base = "logistic"; break;
    case Family::expexp: base = "expexp"; break;
  }
  return symmetrized_ ? "sym(" + base + ")" : base;
}

namespace {

double parse_shape(std::string_view token, std::string_view text) {
  std::string buf(text);
  char* end = nullptr;
  double alpha = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty() || !(alpha > 0.0) ||
      !std::isfinite(alpha)) {
    throw std::invalid_argument("bad shape parameter '" + buf + "' in '" +
                                std::string(token) + "'");
  }
  return alpha;
}

}  // namespace

DistributionSpec parse_distribution(std::string_view text) {
  if (text.size() >= 5 && text.substr(0, 4) == "sym(" && text.back() == ')') {
    return parse_distribution(text.substr(4, text.size() - 5)).symmetrize();
  }
  if (text == "exp") return DistributionSpec::exponential();
  if (text == "normal") return DistributionSpec::normal();
  if (text == "uniform") return DistributionSpec::uniform();
  if (text == "cauchy") return DistributionSpec::cauchy();
  if (text == "lognormal") return DistributionSpec::lognormal();
  if (text == "logistic") return DistributionSpec::logistic();
  if (text == "expexp") return DistributionSpec::expexp();
  if (auto pos = text.find(':'); pos != std::string_view::npos) {
    auto head = text.substr(0, pos);
    auto tail = text.substr(pos + 1);
    if (head == "weibull") return DistributionSpec::weibull(parse_shape(text, tail));
    if (head == "pareto") return DistributionSpec::pareto(parse_shape(text, tail));
  }
  throw std::invalid_argument("unknown distribution '" + std::string(text) + "'");
}

}  // namespace esslab
