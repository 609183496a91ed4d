#include "asp/term.hpp"

#include <array>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace asp {

std::string_view to_string(Kind k) { return k == Kind::Stream ? "stream" : "tree"; }

struct Term::Node {
  Op op = Op::Rec;
  Rational prob;
  std::string label;
  std::array<Term, 2> kids{Term(nullptr), Term(nullptr)};
  std::uint8_t arity = 0;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t structors = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const Rational kZero{0};
const std::string kEmpty;

}  // namespace

Term::Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Term::Term() {
  static const std::shared_ptr<const Node> rec_node = [] {
    auto n = std::make_shared<Node>();
    n->hash = mix(0, static_cast<std::size_t>(Op::Rec));
    return std::shared_ptr<const Node>(n);
  }();
  node_ = rec_node;
}

Term Term::rec() { return Term(); }

Term Term::choice(Rational p, Term left, Term right) {
  auto n = std::make_shared<Node>();
  n->op = Op::Choice;
  n->hash = mix(mix(mix(static_cast<std::size_t>(Op::Choice), std::hash<std::string>{}(to_string(p))),
                    left.hash()),
                right.hash());
  n->prob = std::move(p);
  n->size = 1 + left.size() + right.size();
  n->structors = left.structor_count() + right.structor_count();
  n->kids = {std::move(left), std::move(right)};
  n->arity = 2;
  return Term(std::move(n));
}

Term Term::cons(std::string label, Term tail) {
  auto n = std::make_shared<Node>();
  n->op = Op::Cons;
  n->hash = mix(mix(static_cast<std::size_t>(Op::Cons), std::hash<std::string>{}(label)), tail.hash());
  n->label = std::move(label);
  n->size = 1 + tail.size();
  n->structors = 1 + tail.structor_count();
  n->kids[0] = std::move(tail);
  n->arity = 1;
  return Term(std::move(n));
}

Term Term::mk(std::string label, Term left, Term right) {
  auto n = std::make_shared<Node>();
  n->op = Op::Mk;
  n->hash = mix(mix(mix(static_cast<std::size_t>(Op::Mk), std::hash<std::string>{}(label)), left.hash()),
                right.hash());
  n->label = std::move(label);
  n->size = 1 + left.size() + right.size();
  n->structors = 1 + left.structor_count() + right.structor_count();
  n->kids = {std::move(left), std::move(right)};
  n->arity = 2;
  return Term(std::move(n));
}

Term Term::destruct(Op op, Term arg) {
  if (!is_destructor(op)) throw std::invalid_argument("Term::destruct: not a destructor");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(static_cast<std::size_t>(op), arg.hash());
  n->size = 1 + arg.size();
  n->structors = 1 + arg.structor_count();
  n->kids[0] = std::move(arg);
  n->arity = 1;
  return Term(std::move(n));
}

Term Term::tail(Term arg) { return destruct(Op::Tail, std::move(arg)); }
Term Term::left(Term arg) { return destruct(Op::Left, std::move(arg)); }
Term Term::right(Term arg) { return destruct(Op::Right, std::move(arg)); }

Op Term::op() const { return node_->op; }
const Rational& Term::prob() const { return node_->op == Op::Choice ? node_->prob : kZero; }
const std::string& Term::label() const { return is_constructor(node_->op) ? node_->label : kEmpty; }
std::size_t Term::arity() const { return node_->arity; }

const Term& Term::child(std::size_t i) const {
  assert(i < node_->arity);
  return node_->kids[i];
}

std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::structor_count() const { return node_->structors; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.op() != b.op()) return false;
  if (a.op() == Op::Choice && a.prob() != b.prob()) return false;
  if (is_constructor(a.op()) && a.label() != b.label()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (a.op() == Op::Choice && a.prob() != b.prob())
    return a.prob() < b.prob() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (is_constructor(a.op()))
    if (auto c = a.label() <=> b.label(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.child(i) <=> b.child(i); c != 0) return c;
  return std::strong_ordering::equal;
}

Term substitute_rec(const Term& t, const Term& body) {
  switch (t.op()) {
    case Op::Rec:
      return body;
    case Op::Choice:
      return Term::choice(t.prob(), substitute_rec(t.child(0), body), substitute_rec(t.child(1), body));
    case Op::Cons:
      return Term::cons(t.label(), substitute_rec(t.child(0), body));
    case Op::Mk:
      return Term::mk(t.label(), substitute_rec(t.child(0), body), substitute_rec(t.child(1), body));
    case Op::Tail:
    case Op::Left:
    case Op::Right:
      return Term::destruct(t.op(), substitute_rec(t.child(0), body));
  }
  return t;
}

bool fits_kind(const Term& t, Kind k) {
  switch (t.op()) {
    case Op::Rec:
      return true;
    case Op::Cons:
    case Op::Tail:
      if (k != Kind::Stream) return false;
      break;
    case Op::Mk:
    case Op::Left:
    case Op::Right:
      if (k != Kind::Tree) return false;
      break;
    case Op::Choice:
      break;
  }
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (!fits_kind(t.child(i), k)) return false;
  return true;
}

}  // namespace asp
