#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfch/flow.hpp"
#include "gfch/models.hpp"

namespace gfch {

/// sum over modes of |xi|^(2nu) |c_k|^2, times the period: the integral of
/// |(-D^2)^(nu/2) v|^2 by Parseval.
inline double fractional_seminorm2(const RealField& v, double nu) {
  const Spectrum s = to_spectrum(v);
  const Grid& g = v.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) sum += fractional_symbol(g.wavenumber(j), nu) * std::norm(s[j]);
  return sum * g.length();
}

inline double mass(const RealField& v) { return integral(v); }
inline double l2_squared(const RealField& v) { return inner(v, v); }

/// int v^2 + |(-D^2)^(nu/2) v|^2, conserved by the BBM-type model.
inline double bbm_energy(const RealField& v, double nu) { return l2_squared(v) + fractional_seminorm2(v, nu); }

/// Named functional conserved by a scalar model.
struct Invariant {
  std::string name;
  double (*eval)(const RealField&, double nu);
};

/// Conserved quantities of scalar model `id` at power p. The mass of the
/// CH-type models needs p = 1: int v^p L v_z only vanishes then.
inline std::vector<Invariant> scalar_invariants(ModelId id, int p) {
  auto m = +[](const RealField& v, double) { return mass(v); };
  auto l2 = +[](const RealField& v, double) { return l2_squared(v); };
  auto e = +[](const RealField& v, double nu) { return bbm_energy(v, nu); };
  switch (id) {
    case ModelId::GfKdV:
    case ModelId::GfKdVOriginal: return {{"mass", m}, {"l2", l2}};
    case ModelId::GfBBM: return {{"mass", m}, {"energy", e}};
    case ModelId::GfBBMOriginal: return {{"mass", m}};
    case ModelId::MCH:
    case ModelId::Boussinesq: return {};
    default: return p == 1 ? std::vector<Invariant>{{"mass", m}} : std::vector<Invariant>{};
  }
}

}  // namespace gfch
