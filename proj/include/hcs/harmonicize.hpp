#pragma once

// Canonical harmonic representatives of n-complex structures on the Bolza
// surface, in natural coordinates (mu_2 = 0), plus the seeded generators of
// smooth test fields and orbit perturbations.

#include <cstdint>
#include <random>
#include <vector>

#include "hcs/flows.hpp"
#include "hcs/hodge.hpp"

namespace hcs {

// Smooth automorphic fields of any type (A,B), built from products of the
// discrete holomorphic quadratic and cubic differentials, their conjugates and
// a power of the metric density. Normalised to unit sup pointwise norm.
class RandomFields {
public:
    RandomFields(SurfacePtr S, std::uint64_t seed);
    CVec field(int a, int b);
    // Real-valued smooth function.
    CVec function();
    std::mt19937_64& rng() { return rng_; }

private:
    CVec holomorphic(int degree);
    SurfacePtr S_;
    std::mt19937_64 rng_;
};

// Random real Hamiltonian jet with homogeneous parts of degrees lo..hi, each
// coefficient of sup pointwise norm <= amplitude.
JetField random_hamiltonian(RandomFields& rf, BasePtr base, int cap, int lo, int hi, double amplitude);

struct HarmonicOptions {
    double tol = 1e-7;       // harmonicity, relative Petersson norm of the exact part
    int max_passes = 4;
    FlowOptions flow{};
    double hodge_tol = 1e-8;
};

struct LevelReport {
    int k = 0;
    double pre_residual = 0.0, post_residual = 0.0;
    double dbar_residual = 0.0;  // |dbar(conj(mu_k) g^{k-1})| relative to the operator norm
    double energy_pre = 0.0, energy_post = 0.0;
    double potential_norm = 0.0;
};

struct HarmonicResult {
    HigherStructure rep;
    std::vector<LevelReport> levels;
    std::vector<double> residual_history;  // max residual after each pass
    int passes = 0;
    double displacement = 0.0;  // sup |rep - input|

    json report() const;
};

// Relative Petersson norm of mu_k minus its harmonic projection.
double harmonicity_residual(const BolzaSurface& S, const CVec& mu, int k);
double dbar_residual(const BolzaSurface& S, const CVec& mu, int k);

HarmonicResult harmonic_representative(const HigherStructure& I, const HarmonicOptions& opt = {});
HigherStructure orbit_perturb(const HigherStructure& I, std::uint64_t seed, double amplitude = 0.05, int pieces = 3,
                              const FlowOptions& opt = {});
double energy(const HigherStructure& I, int k);

// Pullback of every mu_k by the rotation by m*pi/4.
HigherStructure isometry_pullback(const HigherStructure& I, int m);

// Surface of a structure's base, or an error if the base is not the Bolza surface.
const BolzaSurface& bolza_base(const HigherStructure& I);

}  // namespace hcs
