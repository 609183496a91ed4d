#include "asp/measure.hpp"

#include <algorithm>

namespace asp {

Rational measure(const Term& t, Kind kind) {
  switch (t.op()) {
    case Op::Rec:
      return Rational(0);
    case Op::Choice: {
      const Rational& p = t.prob();
      return p * measure(t.child(0), kind) + (1 - p) * measure(t.child(1), kind);
    }
    case Op::Cons:
      return measure(t.child(0), kind) + 1;
    case Op::Mk:
      return std::min(measure(t.child(0), kind), measure(t.child(1), kind)) + 1;
    case Op::Tail:
    case Op::Left:
    case Op::Right:
      return measure(t.child(0), kind) - 1;
  }
  return Rational(0);
}

Rational measure(const Definition& d) { return measure(d.body, d.kind); }

Tier1 tier1_verdict(const Definition& d) { return measure(d) > 0 ? Tier1::Asp : Tier1::Abstain; }

}  // namespace asp
