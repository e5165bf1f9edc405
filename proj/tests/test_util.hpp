#pragma once

#include "fcs/fcs_core.hpp"
#include "fcs/witness.hpp"

namespace fcs::test_support {

/// Random unital family with a faithful, unique invariant state.
inline FcsState random_ergodic_state(Rng& rng, int d, int k) {
  for (;;) {
    try {
      FcsState st = fixed_point(witness::random_unital(rng, d, k));
      if (st.ergodic) return st;
    } catch (const NotFaithful&) {
    }
  }
}

}  // namespace fcs::test_support
