#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace lambdad {

enum class Mult : std::uint8_t { One, Many };

struct Age {
  bool inf = false;
  std::uint32_t k = 0;

  static Age fin(std::uint32_t k) { return Age{false, k}; }
  static Age infinite() { return Age{true, 0}; }
  bool operator==(const Age &o) const { return inf == o.inf && (inf || k == o.k); }
  bool operator<(const Age &o) const;
};

struct Mode {
  Mult mult = Mult::One;
  Age age;

  bool operator==(const Mode &o) const { return mult == o.mult && age == o.age; }
  bool operator!=(const Mode &o) const { return !(*this == o); }
  bool operator<(const Mode &o) const;

  static Mode unit() { return Mode{Mult::One, Age::fin(0)}; }
  static Mode make(Mult p, Age a) { return Mode{p, a}; }
};

// Shorthands for the modes that show up everywhere.
inline Mode m1nu() { return Mode::unit(); }
inline Mode mwnu() { return Mode{Mult::Many, Age::fin(0)}; }
inline Mode m1up(std::uint32_t k = 1) { return Mode{Mult::One, Age::fin(k)}; }
inline Mode mwup(std::uint32_t k = 1) { return Mode{Mult::Many, Age::fin(k)}; }
inline Mode m1inf() { return Mode{Mult::One, Age::infinite()}; }
inline Mode mwinf() { return Mode{Mult::Many, Age::infinite()}; }

Mult mult_plus(Mult a, Mult b);
Mult mult_times(Mult a, Mult b);
bool mult_leq(Mult a, Mult b);
Age age_plus(Age a, Age b);
Age age_times(Age a, Age b);
bool age_leq(Age a, Age b);

Mode mode_plus(Mode m, Mode n);
Mode mode_times(Mode m, Mode n);
bool mode_leq(Mode m, Mode n);

// "[1 ^2]", "[w inf]"
std::string to_string(Mode m);
std::string to_string(Age a);

// Set of modes plus the "absent" element, over finite ages 0..bound and inf.
// The absent element is the neutral element of + and is fixed by scaling;
// it stands for a name that is not in a context at all.
// Fixed-size bitset with inline storage for up to 256 bits; bits past the
// size are kept clear.
class SmallBits {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit SmallBits(std::size_t n = 0) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void set();
  bool any() const;
  std::size_t count() const;
  std::size_t find_first() const { return find_from(0); }
  std::size_t find_next(std::size_t i) const { return find_from(i + 1); }

  SmallBits &operator|=(const SmallBits &o);
  SmallBits &operator&=(const SmallBits &o);
  SmallBits operator<<(std::size_t k) const;
  SmallBits operator>>(std::size_t k) const;
  friend SmallBits operator|(SmallBits a, const SmallBits &b) { return a |= b; }
  friend SmallBits operator&(SmallBits a, const SmallBits &b) { return a &= b; }
  bool operator==(const SmallBits &o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  std::size_t find_from(std::size_t i) const;
  void trim();

  std::size_t n_;
  boost::container::small_vector<std::uint64_t, 4> w_;
};

class ModeSet {
 public:
  using Bits = SmallBits;

  explicit ModeSet(std::uint32_t bound = 0);

  static ModeSet empty(std::uint32_t bound) { return ModeSet(bound); }
  static ModeSet absent(std::uint32_t bound);
  // Modes a single use can take: {m | 1nu <= m}.
  static ModeSet use(std::uint32_t bound);
  // Absent, or discarded at any omega mode.
  static ModeSet discard(std::uint32_t bound);
  static ModeSet single(std::uint32_t bound, Mode m);
  static ModeSet everything(std::uint32_t bound);

  std::uint32_t bound() const { return bound_; }
  bool has_absent() const { return absent_; }
  bool contains(Mode m) const;
  bool is_empty() const;
  bool any_present() const;
  void insert(Mode m);
  void insert_absent() { absent_ = true; }

  ModeSet plus(const ModeSet &o) const;
  ModeSet scale(Mode f) const;
  ModeSet preimage(Mode f) const;
  ModeSet meet(const ModeSet &o) const;
  ModeSet join(const ModeSet &o) const;
  // Context union with disjoint domains: a name may come from one side only.
  ModeSet disjoint(const ModeSet &o) const;
  ModeSet without_absent() const;

  std::vector<Mode> elements() const;
  std::string str() const;

  bool operator==(const ModeSet &o) const;

 private:
  Bits &fin(Mult p) { return p == Mult::One ? fin1_ : finw_; }
  const Bits &fin(Mult p) const { return p == Mult::One ? fin1_ : finw_; }
  bool &inf(Mult p) { return p == Mult::One ? inf1_ : infw_; }
  bool inf(Mult p) const { return p == Mult::One ? inf1_ : infw_; }

  std::uint32_t bound_;
  bool absent_ = false;
  bool inf1_ = false, infw_ = false;
  Bits fin1_, finw_;
};

}  // namespace lambdad
