#pragma once

#include "asp/term.hpp"

namespace asp {

/// Expected outputs-minus-consumptions per unfolding. Exact; no floating
/// point is involved.
Rational measure(const Term& t, Kind kind);
Rational measure(const Definition& d);

enum class Tier1 { Asp, Abstain };

/// ASP iff the measure is strictly positive; the criterion is sufficient only.
Tier1 tier1_verdict(const Definition& d);

}  // namespace asp
