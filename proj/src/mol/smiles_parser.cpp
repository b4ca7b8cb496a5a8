//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chemeval/mol/element.h"
#include "chemeval/mol/smiles.h"
#include "chemeval/mol/stereo.h"

namespace chemeval::mol {

std::string_view to_string(SyntaxErrorKind kind) {
  switch (kind) {
  case SyntaxErrorKind::kEmptyInput: return "empty_input";
  case SyntaxErrorKind::kInvalidSyntax: return "invalid_syntax";
  case SyntaxErrorKind::kMismatchedBrackets: return "mismatched_brackets";
  case SyntaxErrorKind::kRingClosure: return "ring_closure";
  case SyntaxErrorKind::kUnknownElement: return "unknown_element";
  case SyntaxErrorKind::kMalformedIsotope: return "malformed_isotope";
  case SyntaxErrorKind::kDanglingBond: return "dangling_bond";
  case SyntaxErrorKind::kUnsupportedFeature: return "unsupported_feature";
  }
  return "invalid_syntax";
}

SyntaxError::SyntaxError(SyntaxErrorKind kind, std::size_t position,
                         std::string message)
    : std::runtime_error(std::string(to_string(kind)) + " at position " +
                         std::to_string(position) + ": " + message),
      kind_(kind), position_(position), detail_(std::move(message)) { }

namespace {

constexpr int kPendingRingSlot = -100;

struct PendingBond {
  bool set = false;
  BondOrder order = BondOrder::kSingle;
  BondMark mark = BondMark::kNone;
  std::size_t pos = 0;
};

struct OpenRing {
  int atom = -1;
  PendingBond bond;
  std::size_t slot = 0;
  std::size_t pos = 0;
};

BondMark flip(BondMark m) {
  switch (m) {
  case BondMark::kUp: return BondMark::kDown;
  case BondMark::kDown: return BondMark::kUp;
  default: return BondMark::kNone;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

class Parser {
public:
  Parser(std::string_view text, ParseOptions options)
      : s_(text), opt_(options) { }

  MoleculeGraph run();

private:
  [[noreturn]] void fail(SyntaxErrorKind kind, std::size_t pos,
                         std::string msg) const {
    throw SyntaxError(kind, pos, std::move(msg));
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }

  void parse_bond_symbol();
  void parse_ring_closure();
  void parse_organic_atom();
  void parse_bracket_atom();
  void attach(Atom atom, std::size_t atom_pos);

  std::string_view s_;
  ParseOptions opt_;
  std::size_t pos_ = 0;

  MoleculeGraph g_;
  std::vector<std::vector<int>> order_;
  int prev_ = -1;
  PendingBond pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::vector<std::size_t> branch_atom_count_;
  std::array<std::optional<OpenRing>, 100> rings_;
};

void Parser::attach(Atom atom, std::size_t atom_pos) {
  const bool chiral_h = atom.chiral != ChiralTag::kNone && atom.explicit_h > 0;
  const int idx = g_.add_atom(std::move(atom));
  order_.emplace_back();

  if (prev_ >= 0) {
    BondOrder order = BondOrder::kSingle;
    BondMark mark = BondMark::kNone;
    if (pending_.set) {
      order = pending_.order;
      mark = pending_.mark;
    } else if (g_.atom(prev_).aromatic && g_.atom(idx).aromatic) {
      order = BondOrder::kAromatic;
    }
    g_.add_bond(prev_, idx, order, mark);
    order_[idx].push_back(prev_);
    order_[prev_].push_back(idx);
  } else if (pending_.set) {
    fail(SyntaxErrorKind::kDanglingBond, pending_.pos,
         "bond symbol without a preceding atom");
  }
  if (chiral_h)
    order_[idx].push_back(kImplicitHydrogenRef);

  pending_ = {};
  prev_ = idx;
  (void)atom_pos;
}

void Parser::parse_bond_symbol() {
  const char c = peek();
  const std::size_t at = pos_;
  if (pending_.set)
    fail(SyntaxErrorKind::kInvalidSyntax, at, "consecutive bond symbols");
  if (prev_ < 0)
    fail(SyntaxErrorKind::kDanglingBond, at,
         "bond symbol without a preceding atom");

  PendingBond b;
  b.set = true;
  b.pos = at;
  switch (c) {
  case '-': b.order = BondOrder::kSingle; break;
  case '=': b.order = BondOrder::kDouble; break;
  case '#': b.order = BondOrder::kTriple; break;
  case ':': b.order = BondOrder::kAromatic; break;
  case '/': b.order = BondOrder::kSingle; b.mark = BondMark::kUp; break;
  case '\\': b.order = BondOrder::kSingle; b.mark = BondMark::kDown; break;
  case '$':
    fail(SyntaxErrorKind::kUnsupportedFeature, at,
         "quadruple bonds are not supported");
  default:
    fail(SyntaxErrorKind::kInvalidSyntax, at, "unexpected character");
  }
  pending_ = b;
  ++pos_;
}

void Parser::parse_ring_closure() {
  const std::size_t at = pos_;
  if (prev_ < 0)
    fail(SyntaxErrorKind::kInvalidSyntax, at,
         "ring-closure digit without a preceding atom");

  int digit;
  if (peek() == '%') {
    if (!std::isdigit(static_cast<unsigned char>(peek(1))) ||
        !std::isdigit(static_cast<unsigned char>(peek(2))))
      fail(SyntaxErrorKind::kRingClosure, at,
           "'%' must be followed by two digits");
    digit = (peek(1) - '0') * 10 + (peek(2) - '0');
    pos_ += 3;
  } else {
    digit = peek() - '0';
    pos_ += 1;
  }

  auto &slot = rings_[digit];
  if (!slot) {
    OpenRing ring;
    ring.atom = prev_;
    ring.bond = pending_;
    ring.slot = order_[prev_].size();
    ring.pos = at;
    order_[prev_].push_back(kPendingRingSlot);
    slot = ring;
    pending_ = {};
    return;
  }

  const OpenRing open = *slot;
  slot.reset();
  const int x = open.atom;
  const int y = prev_;
  if (x == y)
    fail(SyntaxErrorKind::kRingClosure, at,
         "ring closure " + std::to_string(digit) + " bonds an atom to itself");

  const PendingBond &a = open.bond;
  const PendingBond &b = pending_;
  if (a.set && b.set) {
    if (a.order != b.order)
      fail(SyntaxErrorKind::kRingClosure, at,
           "conflicting bond orders on ring closure " + std::to_string(digit));
    if (a.mark != BondMark::kNone && b.mark != BondMark::kNone &&
        a.mark != flip(b.mark))
      fail(SyntaxErrorKind::kRingClosure, at,
           "conflicting geometry marks on ring closure " +
               std::to_string(digit));
  }

  BondOrder order;
  if (b.set)
    order = b.order;
  else if (a.set)
    order = a.order;
  else if (g_.atom(x).aromatic && g_.atom(y).aromatic)
    order = BondOrder::kAromatic;
  else
    order = BondOrder::kSingle;

  if (g_.bond_between(x, y) >= 0)
    fail(SyntaxErrorKind::kRingClosure, at,
         "ring closure " + std::to_string(digit) +
             " duplicates an existing bond");

  if (b.set && b.mark != BondMark::kNone)
    g_.add_bond(y, x, order, b.mark);
  else
    g_.add_bond(x, y, order, a.set ? a.mark : BondMark::kNone);

  order_[x][open.slot] = y;
  order_[y].push_back(x);
  pending_ = {};
}

void Parser::parse_organic_atom() {
  const std::size_t at = pos_;
  const char c = peek();
  Atom atom;

  if (c == '*') {
    if (!opt_.pattern)
      fail(SyntaxErrorKind::kUnsupportedFeature, at,
           "wildcard atoms are not supported");
    atom.wildcard = true;
    atom.atomic_number = 0;
    ++pos_;
    attach(std::move(atom), at);
    return;
  }

  if (c == 'C' && peek(1) == 'l') {
    atom.atomic_number = 17;
    pos_ += 2;
  } else if (c == 'B' && peek(1) == 'r') {
    atom.atomic_number = 35;
    pos_ += 2;
  } else {
    switch (c) {
    case 'B': atom.atomic_number = 5; break;
    case 'C': atom.atomic_number = 6; break;
    case 'N': atom.atomic_number = 7; break;
    case 'O': atom.atomic_number = 8; break;
    case 'P': atom.atomic_number = 15; break;
    case 'S': atom.atomic_number = 16; break;
    case 'F': atom.atomic_number = 9; break;
    case 'I': atom.atomic_number = 53; break;
    case 'b': atom.atomic_number = 5; atom.aromatic = true; break;
    case 'c': atom.atomic_number = 6; atom.aromatic = true; break;
    case 'n': atom.atomic_number = 7; atom.aromatic = true; break;
    case 'o': atom.atomic_number = 8; atom.aromatic = true; break;
    case 'p': atom.atomic_number = 15; atom.aromatic = true; break;
    case 's': atom.atomic_number = 16; atom.aromatic = true; break;
    default:
      fail(SyntaxErrorKind::kUnknownElement, at,
           std::string("unknown element symbol '") + c + "'");
    }
    pos_ += 1;
  }
  atom.declared_aromatic = atom.aromatic;
  attach(std::move(atom), at);
}

void Parser::parse_bracket_atom() {
  const std::size_t open = pos_;
  const std::size_t close = s_.find(']', open);
  if (close == std::string_view::npos)
    fail(SyntaxErrorKind::kMismatchedBrackets, open, "unclosed '['");
  {
    const std::size_t nested = s_.find('[', open + 1);
    if (nested != std::string_view::npos && nested < close)
      fail(SyntaxErrorKind::kMismatchedBrackets, open, "unclosed '['");
  }

  Atom atom;
  atom.bracket = true;
  std::size_t p = open + 1;
  auto ch = [&](std::size_t i) { return i < close ? s_[i] : '\0'; };
  auto isdig = [&](std::size_t i) {
    return std::isdigit(static_cast<unsigned char>(ch(i))) != 0;
  };

  if (isdig(p)) {
    const std::size_t start = p;
    int value = 0;
    while (isdig(p)) {
      value = value * 10 + (ch(p) - '0');
      ++p;
      if (p - start > 3)
        fail(SyntaxErrorKind::kMalformedIsotope, start,
             "isotope mass number has too many digits");
    }
    if (s_[start] == '0')
      fail(SyntaxErrorKind::kMalformedIsotope, start,
           "isotope mass number must be a positive integer without leading "
           "zeros");
    atom.isotope = value;
  }

  // Element symbol.
  const std::size_t sym = p;
  const char c0 = ch(p);
  const char c1 = ch(p + 1);
  if (c0 == '*') {
    if (!opt_.pattern)
      fail(SyntaxErrorKind::kUnsupportedFeature, p,
           "wildcard atoms are not supported");
    atom.wildcard = true;
    atom.atomic_number = 0;
    ++p;
  } else if (c0 == '#') {
    if (!opt_.pattern)
      fail(SyntaxErrorKind::kInvalidSyntax, p, "unexpected '#' in atom");
    ++p;
    int z = 0;
    if (!isdig(p))
      fail(SyntaxErrorKind::kInvalidSyntax, p, "expected atomic number");
    while (isdig(p))
      z = z * 10 + (ch(p++) - '0');
    if (z < 1 || z > kMaxAtomicNumber)
      fail(SyntaxErrorKind::kUnknownElement, sym, "atomic number out of range");
    atom.atomic_number = z;
    atom.any_aromaticity = true;
  } else if (std::islower(static_cast<unsigned char>(c0))) {
    static constexpr std::pair<std::string_view, int> kAromatic[] = {
        {"se", 34}, {"as", 33}, {"te", 52}, {"c", 6}, {"n", 7},
        {"o", 8},   {"p", 15},  {"s", 16},  {"b", 5},
    };
    bool found = false;
    for (auto [text, z] : kAromatic) {
      if (s_.substr(p, text.size()) == text && p + text.size() <= close) {
        atom.atomic_number = z;
        atom.aromatic = true;
        p += text.size();
        found = true;
        break;
      }
    }
    if (!found)
      fail(SyntaxErrorKind::kUnknownElement, sym,
           std::string("unknown aromatic symbol '") + c0 + "'");
  } else if (std::isupper(static_cast<unsigned char>(c0))) {
    std::optional<int> z;
    if (std::islower(static_cast<unsigned char>(c1))) {
      z = element_from_symbol(s_.substr(p, 2));
      if (z)
        p += 2;
    }
    if (!z) {
      z = element_from_symbol(s_.substr(p, 1));
      if (!z)
        fail(SyntaxErrorKind::kUnknownElement, sym,
             "unknown element symbol '" +
                 std::string(s_.substr(p, std::islower(static_cast<unsigned char>(c1)) ? 2 : 1)) +
                 "'");
      p += 1;
    }
    atom.atomic_number = *z;
  } else {
    fail(SyntaxErrorKind::kInvalidSyntax, p, "expected element symbol");
  }
  atom.declared_aromatic = atom.aromatic;

  // Chirality.
  if (ch(p) == '@') {
    if (ch(p + 1) == '@') {
      atom.chiral = ChiralTag::kClockwise;
      p += 2;
    } else {
      atom.chiral = ChiralTag::kCounterClockwise;
      p += 1;
    }
    if (std::isupper(static_cast<unsigned char>(ch(p))) && ch(p) != 'H')
      fail(SyntaxErrorKind::kUnsupportedFeature, p,
           "extended chirality classes are not supported");
  }

  // Hydrogen count.
  if (ch(p) == 'H') {
    ++p;
    atom.h_written = true;
    atom.explicit_h = 1;
    if (isdig(p)) {
      atom.explicit_h = ch(p) - '0';
      ++p;
    }
  }

  // Charge.
  if (ch(p) == '+' || ch(p) == '-') {
    const int sign = ch(p) == '+' ? 1 : -1;
    const char sc = ch(p);
    ++p;
    int mag = 1;
    if (isdig(p)) {
      mag = 0;
      while (isdig(p))
        mag = mag * 10 + (ch(p++) - '0');
    } else {
      while (ch(p) == sc) {
        ++mag;
        ++p;
      }
    }
    if (mag > 15)
      fail(SyntaxErrorKind::kInvalidSyntax, p, "charge magnitude too large");
    atom.charge = sign * mag;
  }

  // Atom class.
  if (ch(p) == ':') {
    if (!opt_.allow_atom_maps)
      fail(SyntaxErrorKind::kUnsupportedFeature, p,
           "atom-map classes are not allowed in plain molecules");
    ++p;
    if (!isdig(p))
      fail(SyntaxErrorKind::kInvalidSyntax, p, "expected atom-map number");
    int m = 0;
    while (isdig(p))
      m = m * 10 + (ch(p++) - '0');
    atom.atom_map = m;
  }

  if (p != close)
    fail(SyntaxErrorKind::kInvalidSyntax, p, "unexpected character in atom");

  pos_ = close + 1;
  attach(std::move(atom), open);
}

MoleculeGraph Parser::run() {
  if (s_.empty())
    fail(SyntaxErrorKind::kEmptyInput, 0, "empty SMILES");

  while (!at_end()) {
    const char c = peek();
    switch (c) {
    case '(': {
      if (prev_ < 0)
        fail(SyntaxErrorKind::kInvalidSyntax, pos_,
             "branch without a preceding atom");
      if (pending_.set)
        fail(SyntaxErrorKind::kDanglingBond, pending_.pos,
             "bond symbol before a branch");
      branches_.emplace_back(prev_, pos_);
      branch_atom_count_.push_back(g_.num_atoms());
      ++pos_;
      break;
    }
    case ')': {
      if (branches_.empty())
        fail(SyntaxErrorKind::kMismatchedBrackets, pos_, "unmatched ')'");
      if (pending_.set)
        fail(SyntaxErrorKind::kDanglingBond, pending_.pos,
             "bond symbol at end of branch");
      if (branch_atom_count_.back() == g_.num_atoms())
        fail(SyntaxErrorKind::kInvalidSyntax, pos_, "empty branch");
      prev_ = branches_.back().first;
      branches_.pop_back();
      branch_atom_count_.pop_back();
      ++pos_;
      break;
    }
    case '[':
      parse_bracket_atom();
      break;
    case ']':
      fail(SyntaxErrorKind::kMismatchedBrackets, pos_, "unmatched ']'");
    case '.':
      if (pending_.set)
        fail(SyntaxErrorKind::kDanglingBond, pending_.pos,
             "bond symbol before '.'");
      if (prev_ < 0)
        fail(SyntaxErrorKind::kInvalidSyntax, pos_, "empty component");
      prev_ = -1;
      ++pos_;
      break;
    case '-': case '=': case '#': case ':': case '/': case '\\': case '$':
      parse_bond_symbol();
      break;
    case '%':
      parse_ring_closure();
      break;
    default:
      if (std::isdigit(static_cast<unsigned char>(c))) {
        parse_ring_closure();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
        parse_organic_atom();
      } else {
        fail(SyntaxErrorKind::kInvalidSyntax, pos_,
             std::string("unexpected character '") + c + "'");
      }
    }
  }

  if (pending_.set)
    fail(SyntaxErrorKind::kDanglingBond, pending_.pos,
         "bond symbol at end of input");
  if (!branches_.empty())
    fail(SyntaxErrorKind::kMismatchedBrackets, s_.size(),
         "unclosed '(' opened at position " +
             std::to_string(branches_.back().second));
  if (prev_ < 0 && g_.num_atoms() > 0)
    fail(SyntaxErrorKind::kInvalidSyntax, s_.size(), "trailing '.'");
  for (int d = 0; d < 100; ++d) {
    if (rings_[d])
      fail(SyntaxErrorKind::kRingClosure, rings_[d]->pos,
           "unmatched ring-closure digit " + std::to_string(d));
  }

  for (int i = 0; i < static_cast<int>(g_.num_atoms()); ++i) {
    Atom &a = g_.mutable_atom(i);
    if (a.chiral != ChiralTag::kNone)
      a.stereo_refs = order_[i];
  }
  g_.set_double_bond_stereo(analyze_bond_marks(g_).stereo);
  return std::move(g_);
}

}  // namespace

MoleculeGraph parse_smiles(std::string_view text, ParseOptions options) {
  Parser parser(trim(text), options);
  return parser.run();
}

}  // namespace chemeval::mol
