#include "lambdad/mode.hpp"

#include <bit>

#include <sstream>

namespace lambdad {

bool Age::operator<(const Age &o) const {
  if (inf != o.inf) return !inf;
  return !inf && k < o.k;
}

bool Mode::operator<(const Mode &o) const {
  if (mult != o.mult) return mult < o.mult;
  return age < o.age;
}

Mult mult_plus(Mult, Mult) { return Mult::Many; }

Mult mult_times(Mult a, Mult b) {
  return (a == Mult::One && b == Mult::One) ? Mult::One : Mult::Many;
}

bool mult_leq(Mult a, Mult b) { return a == Mult::One || b == Mult::Many; }

Age age_plus(Age a, Age b) {
  if (!a.inf && !b.inf && a.k == b.k) return a;
  return Age::infinite();
}

Age age_times(Age a, Age b) {
  if (a.inf || b.inf) return Age::infinite();
  return Age::fin(a.k + b.k);
}

bool age_leq(Age a, Age b) { return b.inf || (!a.inf && a.k == b.k); }

Mode mode_plus(Mode m, Mode n) {
  return Mode{mult_plus(m.mult, n.mult), age_plus(m.age, n.age)};
}

Mode mode_times(Mode m, Mode n) {
  return Mode{mult_times(m.mult, n.mult), age_times(m.age, n.age)};
}

bool mode_leq(Mode m, Mode n) {
  return mult_leq(m.mult, n.mult) && age_leq(m.age, n.age);
}

std::string to_string(Age a) {
  if (a.inf) return "inf";
  return "^" + std::to_string(a.k);
}

std::string to_string(Mode m) {
  return std::string("[") + (m.mult == Mult::One ? "1" : "w") + " " +
         to_string(m.age) + "]";
}

void SmallBits::set() {
  for (auto &w : w_) w = ~std::uint64_t{0};
  trim();
}

void SmallBits::trim() {
  if (n_ % 64) w_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
}

bool SmallBits::any() const {
  for (auto w : w_)
    if (w) return true;
  return false;
}

std::size_t SmallBits::count() const {
  std::size_t c = 0;
  for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t SmallBits::find_from(std::size_t i) const {
  while (i < n_) {
    std::uint64_t w = w_[i / 64] >> (i % 64);
    if (w) return i + static_cast<std::size_t>(std::countr_zero(w));
    i = (i / 64 + 1) * 64;
  }
  return npos;
}

SmallBits &SmallBits::operator|=(const SmallBits &o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

SmallBits &SmallBits::operator&=(const SmallBits &o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

SmallBits SmallBits::operator<<(std::size_t k) const {
  SmallBits r(n_);
  const std::size_t q = k / 64, s = k % 64, m = w_.size();
  for (std::size_t i = q; i < m; ++i) {
    std::uint64_t v = w_[i - q] << s;
    if (s && i > q) v |= w_[i - q - 1] >> (64 - s);
    r.w_[i] = v;
  }
  r.trim();
  return r;
}

SmallBits SmallBits::operator>>(std::size_t k) const {
  SmallBits r(n_);
  const std::size_t q = k / 64, s = k % 64, m = w_.size();
  for (std::size_t i = 0; i + q < m; ++i) {
    std::uint64_t v = w_[i + q] >> s;
    if (s && i + q + 1 < m) v |= w_[i + q + 1] << (64 - s);
    r.w_[i] = v;
  }
  return r;
}

ModeSet::ModeSet(std::uint32_t bound)
    : bound_(bound), fin1_(bound + 1), finw_(bound + 1) {}

ModeSet ModeSet::absent(std::uint32_t bound) {
  ModeSet s(bound);
  s.absent_ = true;
  return s;
}

ModeSet ModeSet::use(std::uint32_t bound) {
  ModeSet s(bound);
  s.fin1_.set(0);
  s.finw_.set(0);
  s.inf1_ = s.infw_ = true;
  return s;
}

ModeSet ModeSet::discard(std::uint32_t bound) {
  ModeSet s(bound);
  s.absent_ = true;
  s.finw_.set();
  s.infw_ = true;
  return s;
}

ModeSet ModeSet::single(std::uint32_t bound, Mode m) {
  ModeSet s(bound);
  s.insert(m);
  return s;
}

ModeSet ModeSet::everything(std::uint32_t bound) {
  ModeSet s(bound);
  s.absent_ = true;
  s.fin1_.set();
  s.finw_.set();
  s.inf1_ = s.infw_ = true;
  return s;
}

bool ModeSet::contains(Mode m) const {
  if (m.age.inf) return inf(m.mult);
  if (m.age.k > bound_) return false;
  return fin(m.mult).test(m.age.k);
}

bool ModeSet::any_present() const {
  return inf1_ || infw_ || fin1_.any() || finw_.any();
}

bool ModeSet::is_empty() const { return !absent_ && !any_present(); }

void ModeSet::insert(Mode m) {
  if (m.age.inf) {
    inf(m.mult) = true;
  } else if (m.age.k <= bound_) {
    fin(m.mult).set(m.age.k);
  }
}

ModeSet ModeSet::plus(const ModeSet &o) const {
  ModeSet r(bound_);
  r.absent_ = absent_ && o.absent_;
  auto take = [&r](const ModeSet &x) {
    r.fin1_ |= x.fin1_;
    r.finw_ |= x.finw_;
    r.inf1_ = r.inf1_ || x.inf1_;
    r.infw_ = r.infw_ || x.infw_;
  };
  if (o.absent_) take(*this);
  if (absent_) take(o);
  if (any_present() && o.any_present()) {
    // Every sum of two present modes is omega; ages survive only when equal.
    Bits a = fin1_ | finw_;
    Bits b = o.fin1_ | o.finw_;
    bool single_same = !inf1_ && !infw_ && !o.inf1_ && !o.infw_ && a.count() == 1 && a == b;
    r.finw_ |= a &= b;
    if (!single_same) r.infw_ = true;
  }
  return r;
}

ModeSet ModeSet::scale(Mode f) const {
  ModeSet r(bound_);
  r.absent_ = absent_;
  for (Mult p : {Mult::One, Mult::Many}) {
    Mult q = mult_times(f.mult, p);
    if (f.age.inf) {
      if (fin(p).any() || inf(p)) r.inf(q) = true;
    } else {
      if (f.age.k <= bound_) r.fin(q) |= fin(p) << f.age.k;
      if (inf(p)) r.inf(q) = true;
    }
  }
  return r;
}

ModeSet ModeSet::preimage(Mode f) const {
  ModeSet r(bound_);
  r.absent_ = absent_;
  for (Mult p : {Mult::One, Mult::Many}) {
    Mult q = mult_times(f.mult, p);
    if (f.age.inf) {
      if (inf(q)) {
        r.fin(p).set();
        r.inf(p) = true;
      }
    } else {
      if (f.age.k <= bound_) r.fin(p) = fin(q) >> f.age.k;
      r.inf(p) = inf(q);
    }
  }
  return r;
}

ModeSet ModeSet::meet(const ModeSet &o) const {
  ModeSet r(bound_);
  r.absent_ = absent_ && o.absent_;
  r.inf1_ = inf1_ && o.inf1_;
  r.infw_ = infw_ && o.infw_;
  r.fin1_ = fin1_ & o.fin1_;
  r.finw_ = finw_ & o.finw_;
  return r;
}

ModeSet ModeSet::join(const ModeSet &o) const {
  ModeSet r(bound_);
  r.absent_ = absent_ || o.absent_;
  r.inf1_ = inf1_ || o.inf1_;
  r.infw_ = infw_ || o.infw_;
  r.fin1_ = fin1_ | o.fin1_;
  r.finw_ = finw_ | o.finw_;
  return r;
}

ModeSet ModeSet::disjoint(const ModeSet &o) const {
  ModeSet r(bound_);
  r.absent_ = absent_ && o.absent_;
  if (o.absent_) r = r.join(without_absent());
  if (absent_) r = r.join(o.without_absent());
  return r;
}

ModeSet ModeSet::without_absent() const {
  ModeSet r = *this;
  r.absent_ = false;
  return r;
}

std::vector<Mode> ModeSet::elements() const {
  std::vector<Mode> out;
  for (Mult p : {Mult::One, Mult::Many}) {
    for (std::size_t k = fin(p).find_first(); k != Bits::npos;
         k = fin(p).find_next(k))
      out.push_back(Mode{p, Age::fin(static_cast<std::uint32_t>(k))});
    if (inf(p)) out.push_back(Mode{p, Age::infinite()});
  }
  return out;
}

std::string ModeSet::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  if (absent_) {
    os << "absent";
    first = false;
  }
  for (Mode m : elements()) {
    if (!first) os << ", ";
    os << to_string(m);
    first = false;
  }
  os << "}";
  return os.str();
}

bool ModeSet::operator==(const ModeSet &o) const {
  return absent_ == o.absent_ && inf1_ == o.inf1_ && infw_ == o.infw_ &&
         elements() == o.elements();
}

}  // namespace lambdad
