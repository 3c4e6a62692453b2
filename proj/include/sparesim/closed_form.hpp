#pragma once

#include "sparesim/rational.hpp"
#include "sparesim/survival.hpp"

namespace sparesim {

// Probability that k simultaneous failures across m identical RAID-6
// groups of n disks lose data, i.e. that some group holds three or more of
// them. Exact for k in {3,4,5}: two groups cannot both hold three of at
// most five failures, so the per-composition terms never overlap.
//   k=3:  m C(n,3) / C(mn,3)
//   k=4: [m C(n,4) + m(m-1) n C(n,3)] / C(mn,4)
//   k=5: [m C(n,5) + m(m-1) n C(n,4) + m C((m-1)n,2) C(n,3)] / C(mn,5)
Rational raid6_fatal_fraction(int m, int n, int k);

// Same for triple-parity groups, where a group loses data at four or more
// failures; k in {4,5,6}.
//   k=4:  m C(n,4) / C(mn,4)
//   k=5: [m C(n,5) + m(m-1) n C(n,4)] / C(mn,5)
//   k=6: [m C(n,6) + m(m-1) n C(n,5) + m C((m-1)n,2) C(n,4)] / C(mn,6)
Rational triple_parity_fatal_fraction(int m, int n, int k);

// Survival profile of m groups of n disks from the closed forms above:
// n_f = parity_equiv, f_j = 1 - fatal_fraction(m, n, n_f + j).
SurvivalProfile profile_from_closed_form(int m, int n, int parity_equiv);

}  // namespace sparesim
