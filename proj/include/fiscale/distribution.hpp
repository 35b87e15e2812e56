#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fiscale/errors.hpp"

namespace fiscale {

enum class Family { normal, laplace, cauchy, exponential, uniform };

// One absolutely continuous mixture part. The member has density
// f(x) = base_density(x / sigma) / sigma with base support fixed per family
// (uniform carries its base bounds [lo, hi]).
struct Component {
  Family family = Family::normal;
  double sigma = 1.0;
  double lo = 0.0;  // uniform base bounds; unused otherwise
  double hi = 1.0;
  double weight = 1.0;
};

struct Atom {
  double position = 0.0;
  double weight = 0.0;
};

// A distribution of the scale model: a finite mixture of named absolutely
// continuous families plus point masses. Immutable after construction; all
// operations are reentrant. The atom relevant to the theory sits at 0;
// off-zero atoms are representable but force infinite information.
class Distribution {
 public:
  static Distribution normal();
  static Distribution laplace();
  static Distribution cauchy();
  static Distribution exponential();
  static Distribution uniform(double a, double b);
  static Distribution dirac(double c);

  // assembled parts; weights sum to 1
  static Distribution from_parts(std::vector<Component> comps, std::vector<Atom> atoms);

  const std::vector<Component>& components() const { return comps_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double atom0() const;           // mass exactly at 0
  double atom_mass() const;       // total point mass
  double continuous_mass() const; // 1 - atom_mass
  bool pure_atom() const { return comps_.empty(); }
  bool has_off_zero_atom() const;
  bool has_family(Family f) const;

  std::string to_string() const;

 private:
  Distribution() = default;
  std::vector<Component> comps_;
  std::vector<Atom> atoms_;
};

// --- component-level evaluations (base density scaled by component sigma) ---
double component_density(const Component& c, double x);
double component_density_derivative(const Component& c, double x);
double component_density_second_derivative(const Component& c, double x);
double component_cdf(const Component& c, double x);
double component_quantile(const Component& c, double p);  // p in (0,1)

// --- distribution operations ---

// Lebesgue density of the continuous part; atoms carry no density.
// Throws ValidationError("no density") for a pure-atom distribution.
double density(const Distribution& d, double x);

// derivatives of the continuous-part density (analytic per family)
double density_derivative(const Distribution& d, double x);
double density_second_derivative(const Distribution& d, double x);

double cdf(const Distribution& d, double x);

// quantile of the normalized continuous part, p in (0,1)
double quantile_continuous(const Distribution& d, double p);

// n i.i.d. draws, deterministic per seed; the atom is realized by the
// mixture-selection step. Two uniforms are consumed per draw.
Eigen::VectorXd sample(const Distribution& d, std::int64_t n, std::uint64_t seed);

// scale transform F_sigma(x) = F(x/sigma); atom positions scale, the atom at
// 0 is a fixed point. Throws ValidationError for sigma <= 0.
Distribution scale(const Distribution& d, double sigma);

// (1-s)*d1 + s*d2. Throws ValidationError for s outside [0,1].
Distribution mix(const Distribution& d1, const Distribution& d2, double s);

// Spec-string grammar: `name[(params)]` with decorations `*scale(s)` and
// `+atom0(e)`; mixture terms joined by `++`, each optionally `weight*spec`.
// An optional leading `mix:` is accepted. Example: 0.9*normal ++ 0.1*dirac(0)
Distribution parse_distribution(std::string_view spec);

// standard normal helpers shared across the library
double std_normal_pdf(double x);
double std_normal_cdf(double x);
double std_normal_quantile(double p);

}  // namespace fiscale
