#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "asp/rational.hpp"

namespace asp {

enum class Kind : std::uint8_t { Stream, Tree };

std::string_view to_string(Kind k);

/// Term constructors of the stream and tree calculi. `Rec` is the single
/// recursion variable of the enclosing definition.
enum class Op : std::uint8_t { Rec, Choice, Cons, Tail, Mk, Left, Right };

constexpr bool is_constructor(Op op) { return op == Op::Cons || op == Op::Mk; }
constexpr bool is_destructor(Op op) {
  return op == Op::Tail || op == Op::Left || op == Op::Right;
}

/// Immutable, structurally compared term. Copies share the underlying nodes.
class Term {
 public:
  /// The recursion variable.
  Term();

  static Term rec();
  static Term choice(Rational p, Term left, Term right);
  static Term cons(std::string label, Term tail);
  static Term tail(Term arg);
  static Term mk(std::string label, Term left, Term right);
  static Term left(Term arg);
  static Term right(Term arg);
  /// Wraps `arg` in the unary destructor `op` (Tail, Left or Right).
  static Term destruct(Op op, Term arg);

  Op op() const;
  /// Choice probability; only meaningful for Op::Choice.
  const Rational& prob() const;
  /// Output label; only meaningful for Op::Cons and Op::Mk.
  const std::string& label() const;
  std::size_t arity() const;
  const Term& child(std::size_t i) const;

  std::size_t hash() const;
  /// Number of nodes.
  std::size_t size() const;
  /// Constructor plus destructor count.
  std::size_t structor_count() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

/// Replaces every recursion variable in `t` by `body`.
Term substitute_rec(const Term& t, const Term& body);

/// Kind implied by the constructors/destructors used in `t`; Rec-only or
/// Choice-of-Rec terms fit either kind.
bool fits_kind(const Term& t, Kind k);

struct Definition {
  std::string name;
  Kind kind = Kind::Stream;
  Term body;

  friend bool operator==(const Definition&, const Definition&) = default;
};

}  // namespace asp

template <>
struct std::hash<asp::Term> {
  std::size_t operator()(const asp::Term& t) const noexcept { return t.hash(); }
};
