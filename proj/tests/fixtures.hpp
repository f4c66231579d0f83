#pragma once

// Shared inputs for the unit suites. The mesh is the coarse level so every
// suite builds in a few seconds; tolerances in the suites are set for it.

#include <memory>
#include <random>

#include "hcs/flat_torus.hpp"
#include "hcs/jets.hpp"
#include "hcs/surface.hpp"

namespace hcs::test {

// Resolution 3 with the looser kernel cutoff that level needs. Built once
// per process.
SurfacePtr coarse_surface();

std::shared_ptr<const FlatTorus> torus(int n = 16);

// Trigonometric polynomial with modes |kx|, |ky| <= band, sup norm amp.
CVec torus_field(const FlatTorus& T, std::mt19937_64& rng, int band, double amp);
// Jet with every monomial of degree lo..cap; real jets pair (a,b) with (b,a).
JetField torus_jet(const std::shared_ptr<const FlatTorus>& T, std::mt19937_64& rng, int cap, int lo, bool real,
                   double amp);
HigherStructure torus_structure(const std::shared_ptr<const FlatTorus>& T, std::mt19937_64& rng, int n, double amp);

double max_diff(const CVec& a, const CVec& b);
double max_diff(const JetField& a, const JetField& b);
double max_diff(const HigherStructure& a, const HigherStructure& b);

}  // namespace hcs::test
