#pragma once

// Action of the cotangent lift of a chart diffeomorphism f on an n-complex
// structure (right action: the ideal of I.f is generated by g o f#).

#include <functional>
#include <vector>

#include "hcs/disk_chart.hpp"
#include "hcs/jets.hpp"

namespace hcs {

struct DiffeoSample {
    cplx f;     // f(z)
    cplx fz;    // df/dz
    cplx fzb;   // df/dzbar
};
using DiffeoFn = std::function<DiffeoSample(cplx)>;
// mu_2..mu_n at a point (index k-2).
using StructureFn = std::function<std::vector<cplx>(cplx)>;

// Pointwise core: mu at f(z) and Df at z give the new mu at z.
std::vector<cplx> act_on_generator(const std::vector<cplx>& mu_at_fz, cplx fz, cplx fzb, Normalization norm);

// Lazily composed pointwise action; exact up to roundoff.
StructureFn act_by_chart_diffeo(const StructureFn& I, const DiffeoFn& f, Normalization norm);

// Grid version on a disk chart; mu o f is read by 4th-order interpolation.
HigherStructure act_by_chart_diffeo(const HigherStructure& I, const DiffeoFn& f);

// Classical pullback of a Beltrami coefficient:
// (dbar f + (mu o f) conj(df)) / (df + (mu o f) conj(dbar f)).
cplx pullback_beltrami(cplx mu_at_fz, cplx fz, cplx fzb);
CVec pullback_beltrami(const std::vector<DiffeoSample>& f, const CVec& mu_at_f);

// Chain rule for D(g o f) from Dg at f(z) and Df at z.
DiffeoSample compose_samples(const DiffeoSample& g_at_fz, const DiffeoSample& f_at_z);

}  // namespace hcs
