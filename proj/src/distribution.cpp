#include "fiscale/distribution.hpp"

#include "fiscale/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace fiscale {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double base_density(Family f, double x, double lo, double hi) {
  switch (f) {
    case Family::normal: return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case Family::laplace: return 0.5 * std::exp(-std::abs(x));
    case Family::cauchy: return 1.0 / (kPi * (1.0 + x * x));
    case Family::exponential: return x > 0.0 ? std::exp(-x) : 0.0;
    case Family::uniform: return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
  }
  return 0.0;
}

double base_density_derivative(Family f, double x, double /*lo*/, double /*hi*/) {
  switch (f) {
    case Family::normal: return -x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case Family::laplace: return x == 0.0 ? 0.0 : -0.5 * std::copysign(1.0, x) * std::exp(-std::abs(x));
    case Family::cauchy: {
      const double u = 1.0 + x * x;
      return -2.0 * x / (kPi * u * u);
    }
    case Family::exponential: return x > 0.0 ? -std::exp(-x) : 0.0;
    case Family::uniform: return 0.0;  // a.e. inside the support
  }
  return 0.0;
}

double base_density_second_derivative(Family f, double x, double /*lo*/, double /*hi*/) {
  switch (f) {
    case Family::normal: return (x * x - 1.0) * kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case Family::laplace: return x == 0.0 ? 0.0 : 0.5 * std::exp(-std::abs(x));
    case Family::cauchy: {
      const double u = 1.0 + x * x;
      return (6.0 * x * x - 2.0) / (kPi * u * u * u);
    }
    case Family::exponential: return x > 0.0 ? std::exp(-x) : 0.0;
    case Family::uniform: return 0.0;
  }
  return 0.0;
}

double base_cdf(Family f, double x, double lo, double hi) {
  switch (f) {
    case Family::normal: return std_normal_cdf(x);
    case Family::laplace: return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
    case Family::cauchy: return 0.5 + std::atan(x) / kPi;
    case Family::exponential: return x > 0.0 ? -std::expm1(-x) : 0.0;
    case Family::uniform:
      if (x <= lo) return 0.0;
      if (x >= hi) return 1.0;
      return (x - lo) / (hi - lo);
  }
  return 0.0;
}

double base_quantile(Family f, double p, double lo, double hi) {
  switch (f) {
    case Family::normal: return std_normal_quantile(p);
    case Family::laplace: return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case Family::cauchy: return std::tan(kPi * (p - 0.5));
    case Family::exponential: return -std::log1p(-p);
    case Family::uniform: return lo + p * (hi - lo);
  }
  return 0.0;
}

void check_weight(double w, const char* what) {
  if (!(w >= 0.0) || !(w <= 1.0 + 1e-12)) {
    throw ValidationError(std::string(what) + ": weight must lie in [0,1]");
  }
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Acklam's rational approximation followed by one Halley step against erfc;
// accurate to full double precision over (0,1).
double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("std_normal_quantile: p must be in (0,1)");

  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double dd[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }

  const double e = std_normal_cdf(x) - p;
  const double u = e / std_normal_pdf(x);
  return x - u / (1.0 + 0.5 * x * u);
}

// --- Distribution builders ---

Distribution Distribution::normal() {
  Distribution d;
  d.comps_.push_back({Family::normal, 1.0, 0.0, 0.0, 1.0});
  return d;
}
Distribution Distribution::laplace() {
  Distribution d;
  d.comps_.push_back({Family::laplace, 1.0, 0.0, 0.0, 1.0});
  return d;
}
Distribution Distribution::cauchy() {
  Distribution d;
  d.comps_.push_back({Family::cauchy, 1.0, 0.0, 0.0, 1.0});
  return d;
}
Distribution Distribution::exponential() {
  Distribution d;
  d.comps_.push_back({Family::exponential, 1.0, 0.0, 0.0, 1.0});
  return d;
}
Distribution Distribution::uniform(double a, double b) {
  if (!(a < b)) throw ValidationError("uniform: requires a < b");
  Distribution d;
  d.comps_.push_back({Family::uniform, 1.0, a, b, 1.0});
  return d;
}
Distribution Distribution::dirac(double c) {
  Distribution d;
  d.atoms_.push_back({c, 1.0});
  return d;
}

Distribution Distribution::from_parts(std::vector<Component> comps, std::vector<Atom> atoms) {
  double total = 0.0;
  for (const auto& c : comps) {
    check_weight(c.weight, "component");
    if (!(c.sigma > 0.0)) throw ValidationError("component: sigma must be positive");
    if (c.family == Family::uniform && !(c.lo < c.hi)) throw ValidationError("uniform: requires a < b");
    total += c.weight;
  }
  for (const auto& at : atoms) {
    check_weight(at.weight, "atom");
    total += at.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("distribution: weights must sum to 1");

  Distribution d;
  for (const auto& c : comps)
    if (c.weight > 0.0) d.comps_.push_back(c);
  for (const auto& at : atoms) {
    if (at.weight <= 0.0) continue;
    auto same = std::find_if(d.atoms_.begin(), d.atoms_.end(),
                             [&](const Atom& x) { return x.position == at.position; });
    if (same != d.atoms_.end())
      same->weight += at.weight;
    else
      d.atoms_.push_back(at);
  }
  if (d.comps_.empty() && d.atoms_.empty()) throw ValidationError("distribution: empty");
  return d;
}

double Distribution::atom0() const {
  double w = 0.0;
  for (const auto& at : atoms_)
    if (at.position == 0.0) w += at.weight;
  return w;
}

double Distribution::atom_mass() const {
  double w = 0.0;
  for (const auto& at : atoms_) w += at.weight;
  return w;
}

double Distribution::continuous_mass() const {
  double w = 0.0;
  for (const auto& c : comps_) w += c.weight;
  return w;
}

bool Distribution::has_off_zero_atom() const {
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.position != 0.0; });
}

bool Distribution::has_family(Family f) const {
  return std::any_of(comps_.begin(), comps_.end(),
                     [&](const Component& c) { return c.family == f; });
}

// --- component evaluations ---

double component_density(const Component& c, double x) {
  return base_density(c.family, x / c.sigma, c.lo, c.hi) / c.sigma;
}

double component_density_derivative(const Component& c, double x) {
  return base_density_derivative(c.family, x / c.sigma, c.lo, c.hi) / (c.sigma * c.sigma);
}

double component_density_second_derivative(const Component& c, double x) {
  return base_density_second_derivative(c.family, x / c.sigma, c.lo, c.hi) /
         (c.sigma * c.sigma * c.sigma);
}

double component_cdf(const Component& c, double x) {
  return base_cdf(c.family, x / c.sigma, c.lo, c.hi);
}

double component_quantile(const Component& c, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("component_quantile: p must be in (0,1)");
  return c.sigma * base_quantile(c.family, p, c.lo, c.hi);
}

// --- distribution-level operations ---

double density(const Distribution& d, double x) {
  if (d.pure_atom()) throw ValidationError("no density");
  double f = 0.0;
  for (const auto& c : d.components()) f += c.weight * component_density(c, x);
  return f;
}

double density_derivative(const Distribution& d, double x) {
  if (d.pure_atom()) throw ValidationError("no density");
  double fp = 0.0;
  for (const auto& c : d.components()) fp += c.weight * component_density_derivative(c, x);
  return fp;
}

double density_second_derivative(const Distribution& d, double x) {
  if (d.pure_atom()) throw ValidationError("no density");
  double fpp = 0.0;
  for (const auto& c : d.components()) fpp += c.weight * component_density_second_derivative(c, x);
  return fpp;
}

double cdf(const Distribution& d, double x) {
  double F = 0.0;
  for (const auto& c : d.components()) F += c.weight * component_cdf(c, x);
  for (const auto& at : d.atoms())
    if (at.position <= x) F += at.weight;
  return F;
}

double quantile_continuous(const Distribution& d, double p) {
  if (d.pure_atom()) throw ValidationError("no continuous support");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("quantile_continuous: p must be in (0,1)");
  const auto& comps = d.components();
  if (comps.size() == 1) return component_quantile(comps[0], p);

  const double mass = d.continuous_mass();
  double lo = component_quantile(comps[0], 1e-15), hi = lo;
  for (const auto& c : comps) {
    lo = std::min(lo, component_quantile(c, 1e-15));
    hi = std::max(hi, component_quantile(c, 1.0 - 1e-15));
  }
  auto cont_cdf = [&](double x) {
    double F = 0.0;
    for (const auto& c : comps) F += c.weight * component_cdf(c, x);
    return F / mass;
  };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cont_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd sample(const Distribution& d, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample: n must be >= 1");
  Rng rng(seed);
  const auto& comps = d.components();
  const auto& atoms = d.atoms();

  Eigen::VectorXd out(n);
  for (std::int64_t k = 0; k < n; ++k) {
    const double u_sel = rng.uniform01();
    const double u_val = rng.uniform01();
    double acc = 0.0;
    double x = 0.0;
    bool chosen = false;
    for (const auto& c : comps) {
      acc += c.weight;
      if (u_sel <= acc) {
        x = component_quantile(c, u_val);
        chosen = true;
        break;
      }
    }
    if (!chosen) {
      for (const auto& at : atoms) {
        acc += at.weight;
        if (u_sel <= acc) {
          x = at.position;
          chosen = true;
          break;
        }
      }
    }
    if (!chosen) {
      // u_sel fell into the rounding gap above the last cumulative weight
      x = atoms.empty() ? component_quantile(comps.back(), u_val) : atoms.back().position;
    }
    out[k] = x;
  }
  return out;
}

Distribution scale(const Distribution& d, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("scale: sigma must be positive");
  std::vector<Component> comps = d.components();
  std::vector<Atom> atoms = d.atoms();
  for (auto& c : comps) c.sigma *= sigma;
  for (auto& at : atoms) at.position *= sigma;
  return Distribution::from_parts(std::move(comps), std::move(atoms));
}

Distribution mix(const Distribution& d1, const Distribution& d2, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("mix: s must lie in [0,1]");
  std::vector<Component> comps;
  std::vector<Atom> atoms;
  for (auto c : d1.components()) {
    c.weight *= (1.0 - s);
    comps.push_back(c);
  }
  for (auto c : d2.components()) {
    c.weight *= s;
    comps.push_back(c);
  }
  for (auto at : d1.atoms()) {
    at.weight *= (1.0 - s);
    atoms.push_back(at);
  }
  for (auto at : d2.atoms()) {
    at.weight *= s;
    atoms.push_back(at);
  }
  return Distribution::from_parts(std::move(comps), std::move(atoms));
}

// --- spec-string parsing ---

namespace {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  double number() {
    skip_ws();
    const std::string rest(s.substr(pos));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) throw ValidationError("distribution spec: expected a number near '" + rest + "'");
    pos += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (pos == start) throw ValidationError("distribution spec: expected a name");
    return std::string(s.substr(start, pos - start));
  }
};

std::vector<double> parse_params(Cursor& cur) {
  std::vector<double> params;
  if (!cur.eat("(")) return params;
  params.push_back(cur.number());
  while (cur.eat(",")) params.push_back(cur.number());
  if (!cur.eat(")")) throw ValidationError("distribution spec: expected ')'");
  return params;
}

Distribution parse_base(Cursor& cur) {
  const std::string name = cur.ident();
  const auto params = parse_params(cur);
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw ValidationError("distribution spec: '" + name + "' takes " + std::to_string(k) + " parameter(s)");
  };
  if (name == "normal") { need(0); return Distribution::normal(); }
  if (name == "laplace") { need(0); return Distribution::laplace(); }
  if (name == "cauchy") { need(0); return Distribution::cauchy(); }
  if (name == "exponential" || name == "exp") { need(0); return Distribution::exponential(); }
  if (name == "uniform") { need(2); return Distribution::uniform(params[0], params[1]); }
  if (name == "dirac") { need(1); return Distribution::dirac(params[0]); }
  throw ValidationError("distribution spec: unknown family '" + name + "'");
}

Distribution parse_term(Cursor& cur) {
  Distribution d = parse_base(cur);
  for (;;) {
    if (cur.eat("*scale(")) {
      const double s = cur.number();
      if (!cur.eat(")")) throw ValidationError("distribution spec: expected ')'");
      d = scale(d, s);
    } else if (cur.eat("+atom0(")) {
      const double e = cur.number();
      if (!cur.eat(")")) throw ValidationError("distribution spec: expected ')'");
      d = mix(d, Distribution::dirac(0.0), e);
    } else {
      break;
    }
  }
  return d;
}

}  // namespace

Distribution parse_distribution(std::string_view spec) {
  Cursor cur{spec};
  cur.eat("mix:");

  std::vector<double> weights;
  std::vector<Distribution> terms;
  for (;;) {
    cur.skip_ws();
    double w = 1.0;
    // a term may start with `weight *`; distinguish from a bare family name
    if (cur.pos < cur.s.size() &&
        (std::isdigit(static_cast<unsigned char>(cur.s[cur.pos])) || cur.s[cur.pos] == '.' ||
         cur.s[cur.pos] == '+' || cur.s[cur.pos] == '-')) {
      w = cur.number();
      if (!cur.eat("*")) throw ValidationError("distribution spec: expected '*' after weight");
    }
    weights.push_back(w);
    terms.push_back(parse_term(cur));
    if (!cur.eat("++")) break;
  }
  if (!cur.done()) throw ValidationError("distribution spec: trailing input");

  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("distribution spec: weights must lie in [0,1]");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("distribution spec: weights must sum to 1");

  std::vector<Component> comps;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (auto c : terms[i].components()) {
      c.weight *= weights[i];
      comps.push_back(c);
    }
    for (auto at : terms[i].atoms()) {
      at.weight *= weights[i];
      atoms.push_back(at);
    }
  }
  return Distribution::from_parts(std::move(comps), std::move(atoms));
}

std::string Distribution::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  auto sep = [&] {
    if (!first) os << " ++ ";
    first = false;
  };
  for (const auto& c : comps_) {
    sep();
    os << c.weight << "*";
    switch (c.family) {
      case Family::normal: os << "normal"; break;
      case Family::laplace: os << "laplace"; break;
      case Family::cauchy: os << "cauchy"; break;
      case Family::exponential: os << "exponential"; break;
      case Family::uniform: os << "uniform(" << c.lo << "," << c.hi << ")"; break;
    }
    if (c.sigma != 1.0) os << "*scale(" << c.sigma << ")";
  }
  for (const auto& at : atoms_) {
    sep();
    os << at.weight << "*dirac(" << at.position << ")";
  }
  return os.str();
}

}  // namespace fiscale
