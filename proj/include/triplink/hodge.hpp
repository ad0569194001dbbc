#pragma once

#include <vector>

#include "triplink/forms.hpp"

namespace triplink {

struct SolveOptions {
  double tol_closed = 1e-6;  // absolute bound on ||d beta||_inf
  double tol_period = 1e-4;  // absolute bound on each subtorus period
  bool check_closed = true;
  bool check_periods = true;
};

// Integrals of a degree-2 form over the coordinate 2-subtori, ordered like
// the components: (12), (13), (23) in dimension 3 (each averaged over the
// transverse circle), a single entry in dimension 2.
std::vector<double> periods(const DiscreteForm& beta);

// Solve d eta = beta for a closed degree-2 form with vanishing periods, by
// componentwise Fourier inversion. The returned 1-form is the Coulomb-gauge
// representative: divergence-free in Fourier space exactly, zero harmonic
// (constant) part. Zero and Nyquist modes of beta are outside the solvable
// band and are projected away; the period precondition certifies the zero
// mode, and smooth inputs have negligible Nyquist mass. Deterministic:
// identical input bits give identical output bits.
//
// Throws NotClosedError when ||d beta||_inf exceeds tol_closed (dimension 3;
// a top-degree form in dimension 2 is vacuously closed) and
// NonExactFormError{which_period, value} when a period exceeds tol_period.
DiscreteForm solve_potential(const DiscreteForm& beta, const SolveOptions& opts = {});

}  // namespace triplink
