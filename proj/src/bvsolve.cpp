#include "strbv/bvsolve.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace strbv {

using boost::multiprecision::int256_t;

// ---------------------------------------------------------------------------
// Linear terms

LinTerm LinTerm::of_var(const std::string& name) {
  LinTerm t;
  t.coeffs[name] = 1;
  return t;
}

LinTerm LinTerm::of_constant(std::uint64_t c) {
  LinTerm t;
  t.constant = c;
  return t;
}

namespace {

void add_coeff(std::map<std::string, std::uint64_t>& m, const std::string& v, std::uint64_t c, std::uint64_t mask) {
  std::uint64_t next = (m[v] + c) & mask;
  if (next == 0) m.erase(v);
  else m[v] = next;
}

}  // namespace

LinTerm lin_add(const LinTerm& a, const LinTerm& b, std::uint64_t mask) {
  LinTerm out = a;
  for (const auto& [v, c] : b.coeffs) add_coeff(out.coeffs, v, c, mask);
  out.constant = (a.constant + b.constant) & mask;
  return out;
}

LinTerm lin_scale(const LinTerm& a, std::uint64_t c, std::uint64_t mask) {
  LinTerm out;
  for (const auto& [v, k] : a.coeffs) add_coeff(out.coeffs, v, k * c, mask);
  out.constant = (a.constant * c) & mask;
  return out;
}

LinTerm lin_sub(const LinTerm& a, const LinTerm& b, std::uint64_t mask) {
  return lin_add(a, lin_scale(b, mask, mask), mask);
}

std::uint64_t lin_eval(const LinTerm& t, const Assignment& a, std::uint64_t mask) {
  std::uint64_t acc = t.constant;
  for (const auto& [v, c] : t.coeffs) {
    auto it = a.find(v);
    if (it == a.end()) throw EvalError("unassigned length variable '" + v + "'");
    acc += c * it->second;
  }
  return acc & mask;
}

LinTerm linearize(const BvTerm& t, std::uint64_t mask, const std::function<std::string(const std::string&)>& len_name) {
  switch (t.kind()) {
    case BvTerm::Kind::var: return LinTerm::of_var(t.name());
    case BvTerm::Kind::constant: return LinTerm::of_constant(t.value() & mask);
    case BvTerm::Kind::add:
      return lin_add(linearize(t.left(), mask, len_name), linearize(t.right(), mask, len_name), mask);
    case BvTerm::Kind::mul: return lin_scale(linearize(t.left(), mask, len_name), t.value(), mask);
    case BvTerm::Kind::strlen: {
      LinTerm out;
      for (const Leaf& leaf : flatten(t.str())) {
        if (leaf.is_var) out = lin_add(out, LinTerm::of_var(len_name(leaf.text)), mask);
        else out.constant = (out.constant + leaf.text.size()) & mask;
      }
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// LinearBvSystem

LinearBvSystem::LinearBvSystem(unsigned width)
    : width_(width), mask_(width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1) {}

void LinearBvSystem::add_var(const std::string& name) {
  if (!has_var(name)) vars_.push_back(name);
}

bool LinearBvSystem::has_var(const std::string& name) const {
  return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

void LinearBvSystem::register_term(const LinTerm& t) {
  for (const auto& [v, c] : t.coeffs) add_var(v);
}

void LinearBvSystem::add_eq(const LinTerm& lhs, const LinTerm& rhs) {
  register_term(lhs);
  register_term(rhs);
  LinTerm d = lin_sub(lhs, rhs, mask_);
  eqs_.push_back(LinEq{d.coeffs, (mask_ - d.constant + 1) & mask_});
}

void LinearBvSystem::add_cmp(CmpOp op, const LinTerm& lhs, const LinTerm& rhs) {
  if (op == CmpOp::eq) {
    add_eq(lhs, rhs);
    return;
  }
  register_term(lhs);
  register_term(rhs);
  cmps_.push_back(LinCmp{op, lhs, rhs});
}

void LinearBvSystem::append(const LinearBvSystem& other) {
  if (other.width_ != width_) throw InternalError("appending systems of different widths");
  for (const auto& v : other.vars_) add_var(v);
  eqs_.insert(eqs_.end(), other.eqs_.begin(), other.eqs_.end());
  cmps_.insert(cmps_.end(), other.cmps_.begin(), other.cmps_.end());
}

bool LinearBvSystem::satisfied_by(const Assignment& a) const {
  for (const auto& e : eqs_) {
    LinTerm t;
    t.coeffs = e.coeffs;
    if (lin_eval(t, a, mask_) != e.constant) return false;
  }
  for (const auto& c : cmps_) {
    if (!compare(c.op, lin_eval(c.lhs, a, mask_), lin_eval(c.rhs, a, mask_))) return false;
  }
  return true;
}

bool LinearBvSystem::mentions(const std::string& name) const {
  for (const auto& e : eqs_)
    if (e.coeffs.count(name)) return true;
  for (const auto& c : cmps_)
    if (c.lhs.coeffs.count(name) || c.rhs.coeffs.count(name)) return true;
  return false;
}

namespace {

std::string show(const LinTerm& t) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : t.coeffs) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c << "*";
    os << v;
  }
  if (first || t.constant != 0) os << (first ? "" : " + ") << t.constant;
  return os.str();
}

}  // namespace

std::string LinearBvSystem::describe() const {
  std::ostringstream os;
  for (const auto& e : eqs_) {
    LinTerm t;
    t.coeffs = e.coeffs;
    os << show(t) << " == " << e.constant << "\n";
  }
  for (const auto& c : cmps_) os << show(c.lhs) << " " << to_string(c.op) << " " << show(c.rhs) << "\n";
  return os.str();
}

std::uint64_t mod_inverse(std::uint64_t odd, std::uint64_t mask) {
  // Newton iteration doubles the number of correct low bits each step.
  std::uint64_t x = odd;
  for (int i = 0; i < 6; ++i) x *= 2 - odd * x;
  return x & mask;
}

// ---------------------------------------------------------------------------
// Decision procedure

namespace {

struct Affine {
  std::vector<std::uint64_t> c;
  std::uint64_t k0 = 0;
};

struct Eliminated {
  bool unsat = false;
  std::vector<std::optional<Affine>> defs;
  std::vector<Affine> residual;  // each means value == 0
  std::vector<std::pair<CmpOp, std::pair<Affine, Affine>>> cmps;
};

class Kernel {
 public:
  explicit Kernel(const LinearBvSystem& sys) : sys_(sys), n_(sys.vars().size()), mask_(sys.mask()) {
    for (std::size_t i = 0; i < n_; ++i) index_[sys.vars()[i]] = i;
  }

  Affine from_term(const LinTerm& t) const {
    Affine a{std::vector<std::uint64_t>(n_, 0), t.constant & mask_};
    for (const auto& [v, c] : t.coeffs) a.c[index_.at(v)] = c & mask_;
    return a;
  }

  void substitute(Affine& e, std::size_t var, const Affine& def) const {
    std::uint64_t a = e.c[var];
    if (a == 0) return;
    e.c[var] = 0;
    for (std::size_t j = 0; j < n_; ++j) e.c[j] = (e.c[j] + a * def.c[j]) & mask_;
    e.k0 = (e.k0 + a * def.k0) & mask_;
  }

  void substitute_all(Affine& e, const std::vector<std::optional<Affine>>& defs) const {
    for (std::size_t v = 0; v < n_; ++v)
      if (defs[v]) substitute(e, v, *defs[v]);
  }

  // Equation e == 0 with every coefficient even: impossible when the
  // constant has fewer trailing zeros than all coefficients.
  bool two_adic_ok(const Affine& e) const {
    int t = static_cast<int>(sys_.width());
    bool any = false;
    for (std::uint64_t c : e.c) {
      if (c != 0) {
        t = std::min(t, std::countr_zero(c));
        any = true;
      }
    }
    if (!any) return e.k0 == 0;
    return e.k0 == 0 || std::countr_zero(e.k0) >= t;
  }

  Eliminated eliminate() const {
    Eliminated out;
    out.defs.assign(n_, std::nullopt);
    std::vector<Affine> pending;
    for (const auto& eq : sys_.eqs()) {
      LinTerm t;
      t.coeffs = eq.coeffs;
      Affine a = from_term(t);
      a.k0 = (mask_ - (eq.constant & mask_) + 1) & mask_;
      pending.push_back(std::move(a));
    }
    for (Affine e : pending) {
      substitute_all(e, out.defs);
      std::optional<std::size_t> pivot;
      for (std::size_t i = n_; i-- > 0;) {
        if (e.c[i] & 1) {
          pivot = i;
          break;
        }
      }
      if (!pivot) {
        if (!two_adic_ok(e)) {
          out.unsat = true;
          return out;
        }
        if (std::any_of(e.c.begin(), e.c.end(), [](std::uint64_t c) { return c != 0; })) out.residual.push_back(e);
        continue;
      }
      std::size_t p = *pivot;
      std::uint64_t neg_inv = (mask_ - mod_inverse(e.c[p], mask_) + 1) & mask_;
      Affine def{std::vector<std::uint64_t>(n_, 0), (e.k0 * neg_inv) & mask_};
      for (std::size_t j = 0; j < n_; ++j)
        if (j != p) def.c[j] = (e.c[j] * neg_inv) & mask_;
      for (auto& d : out.defs)
        if (d) substitute(*d, p, def);
      for (auto& r : out.residual) substitute(r, p, def);
      out.defs[p] = std::move(def);
    }
    std::vector<Affine> kept;
    for (auto& r : out.residual) {
      if (!two_adic_ok(r)) {
        out.unsat = true;
        return out;
      }
      if (std::any_of(r.c.begin(), r.c.end(), [](std::uint64_t c) { return c != 0; })) kept.push_back(r);
    }
    out.residual = std::move(kept);
    for (const auto& cmp : sys_.cmps()) {
      Affine l = from_term(cmp.lhs), r = from_term(cmp.rhs);
      substitute_all(l, out.defs);
      substitute_all(r, out.defs);
      out.cmps.push_back({cmp.op, {std::move(l), std::move(r)}});
    }
    return out;
  }

  std::size_t size() const { return n_; }
  std::uint64_t mask() const { return mask_; }
  const LinearBvSystem& sys() const { return sys_; }

 private:
  const LinearBvSystem& sys_;
  std::size_t n_;
  std::uint64_t mask_;
  std::map<std::string, std::size_t> index_;
};

struct Box {
  std::vector<std::uint64_t> lo, hi;
  bool fixed(std::size_t i) const { return lo[i] == hi[i]; }
};

class BranchAndBound {
 public:
  BranchAndBound(const Kernel& k, const Eliminated& el, const Deadline& dl)
      : k_(k), el_(el), dl_(dl), mask_(k.mask()), modulus_(int256_t(mask_) + 1) {
    for (std::size_t i = 0; i < k_.size(); ++i)
      if (!el_.defs[i]) free_.push_back(i);
  }

  std::optional<Assignment> run() {
    Box b{std::vector<std::uint64_t>(k_.size(), 0), std::vector<std::uint64_t>(k_.size(), 0)};
    for (std::size_t i : free_) b.hi[i] = mask_;
    return search(b);
  }

 private:
  std::uint64_t eval(const Affine& a, const Box& b) const {
    std::uint64_t v = a.k0;
    for (std::size_t i = 0; i < a.c.size(); ++i) v += a.c[i] * b.lo[i];
    return v & mask_;
  }

  // Range of the wrapped value of `a` over the box, as an interval [lo, hi].
  std::pair<std::uint64_t, std::uint64_t> range(const Affine& a, const Box& b) const {
    int256_t L = a.k0, H = a.k0;
    const std::uint64_t half = (mask_ >> 1) + 1;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] == 0) continue;
      int256_t s = a.c[i] >= half ? int256_t(a.c[i]) - modulus_ : int256_t(a.c[i]);
      if (s > 0) {
        L += s * b.lo[i];
        H += s * b.hi[i];
      } else {
        L += s * b.hi[i];
        H += s * b.lo[i];
      }
    }
    int256_t fl = floor_div(L), fh = floor_div(H);
    if (fl != fh) return {0, mask_};
    return {static_cast<std::uint64_t>(L - fl * modulus_), static_cast<std::uint64_t>(H - fh * modulus_)};
  }

  int256_t floor_div(const int256_t& x) const {
    int256_t q = x / modulus_;
    if (x < 0 && q * modulus_ != x) q -= 1;
    return q;
  }

  static bool cmp_possible(CmpOp op, std::pair<std::uint64_t, std::uint64_t> a, std::pair<std::uint64_t, std::uint64_t> b) {
    switch (op) {
      case CmpOp::eq: return !(a.second < b.first || b.second < a.first);
      case CmpOp::ne: return !(a.first == a.second && b.first == b.second && a.first == b.first);
      case CmpOp::lt: return a.first < b.second;
      case CmpOp::le: return a.first <= b.second;
      case CmpOp::gt: return a.second > b.first;
      case CmpOp::ge: return a.second >= b.first;
    }
    return true;
  }

  int unfixed_count(const Affine& a, const Box& b, std::size_t& which) const {
    int n = 0;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] != 0 && !b.fixed(i)) {
        ++n;
        which = i;
      }
    }
    return n;
  }

  // Intersects [lo, hi] of variable i with the cyclic interval [a, b].
  bool restrict_cyclic(Box& box, std::size_t i, std::uint64_t a, std::uint64_t b, bool& changed) const {
    std::uint64_t lo = box.lo[i], hi = box.hi[i];
    std::uint64_t nlo, nhi;
    if (a <= b) {
      nlo = std::max(lo, a);
      nhi = std::min(hi, b);
      if (nlo > nhi) return false;
    } else {
      bool p1 = a <= hi;  // [a, max] piece
      bool p2 = lo <= b;  // [0, b] piece
      if (!p1 && !p2) return false;
      nlo = p2 ? lo : std::max(lo, a);
      nhi = p1 ? hi : std::min(hi, b);
    }
    if (nlo != lo || nhi != hi) {
      box.lo[i] = nlo;
      box.hi[i] = nhi;
      changed = true;
    }
    return true;
  }

  bool propagate_residual(const Affine& e, Box& box, bool& changed) const {
    std::size_t v = 0;
    int n = unfixed_count(e, box, v);
    if (n == 0) return eval(e, box) == 0;
    if (n != 1) return range_contains_zero(e, box);
    Affine rest = e;
    std::uint64_t c = rest.c[v];
    rest.c[v] = 0;
    std::uint64_t r = (mask_ - eval(rest, box) + 1) & mask_;
    int t = std::countr_zero(c);
    if (r != 0 && std::countr_zero(r) < t) return false;
    unsigned k = k_.sys().width();
    std::uint64_t sub_mask = mask_ >> t;
    std::uint64_t x0 = (mod_inverse((c >> t) & sub_mask, sub_mask) * (r >> t)) & sub_mask;
    if (t == 0) return restrict_cyclic(box, v, x0, x0, changed);
    unsigned __int128 step = static_cast<unsigned __int128>(1) << (k - t);
    unsigned __int128 lo = box.lo[v], hi = box.hi[v], first = x0;
    if (first < lo) first += (lo - first + step - 1) / step * step;
    if (first > hi) return false;
    unsigned __int128 last = first + (hi - first) / step * step;
    if (first != lo || last != hi) {
      box.lo[v] = static_cast<std::uint64_t>(first);
      box.hi[v] = static_cast<std::uint64_t>(last);
      changed = true;
    }
    return true;
  }

  bool range_contains_zero(const Affine& e, const Box& box) const { return range(e, box).first == 0; }

  bool propagate_cmp(CmpOp op, const Affine& lhs, const Affine& rhs, Box& box, bool& changed) const {
    std::size_t vl = 0, vr = 0;
    int nl = unfixed_count(lhs, box, vl), nr = unfixed_count(rhs, box, vr);
    if (nl == 0 && nr == 0) return compare(op, eval(lhs, box), eval(rhs, box));
    if (!cmp_possible(op, range(lhs, box), range(rhs, box))) return false;
    if (nl + nr != 1) return true;
    const Affine& side = nl == 1 ? lhs : rhs;
    const Affine& other = nl == 1 ? rhs : lhs;
    std::size_t v = nl == 1 ? vl : vr;
    CmpOp o = nl == 1 ? op : mirror(op);
    std::uint64_t c = side.c[v];
    if (c != 1 && c != mask_) return true;
    Affine rest = side;
    rest.c[v] = 0;
    std::uint64_t d = eval(rest, box);
    std::uint64_t r = eval(other, box);
    std::uint64_t p = 0, q = mask_;
    switch (o) {
      case CmpOp::lt:
        if (r == 0) return false;
        q = r - 1;
        break;
      case CmpOp::le: q = r; break;
      case CmpOp::gt:
        if (r == mask_) return false;
        p = r + 1;
        break;
      case CmpOp::ge: p = r; break;
      case CmpOp::eq: p = q = r; break;
      case CmpOp::ne: {
        std::uint64_t x = c == 1 ? (r - d) & mask_ : (d - r) & mask_;
        if (box.lo[v] == x) {
          if (box.hi[v] == x) return false;
          ++box.lo[v];
          changed = true;
        } else if (box.hi[v] == x) {
          --box.hi[v];
          changed = true;
        }
        return true;
      }
    }
    if (p == 0 && q == mask_) return true;
    if (c == 1) return restrict_cyclic(box, v, (p - d) & mask_, (q - d) & mask_, changed);
    return restrict_cyclic(box, v, (d - q) & mask_, (d - p) & mask_, changed);
  }

  bool propagate(Box& box) const {
    for (int round = 0; round < 64; ++round) {
      bool changed = false;
      for (const auto& e : el_.residual)
        if (!propagate_residual(e, box, changed)) return false;
      for (const auto& [op, sides] : el_.cmps)
        if (!propagate_cmp(op, sides.first, sides.second, box, changed)) return false;
      if (!changed) break;
    }
    return true;
  }

  Assignment materialize(const Box& box) const {
    Assignment a;
    const auto& names = k_.sys().vars();
    for (std::size_t i = 0; i < k_.size(); ++i)
      a[names[i]] = el_.defs[i] ? eval(*el_.defs[i], box) : box.lo[i];
    return a;
  }

  std::optional<Assignment> search(Box box) {
    if ((++nodes_ & 255) == 0) dl_.check();
    if (!propagate(box)) return std::nullopt;
    std::optional<std::size_t> split;
    for (std::size_t i : free_) {
      if (!box.fixed(i)) {
        split = i;
        break;
      }
    }
    if (!split) {
      Assignment a = materialize(box);
      if (k_.sys().satisfied_by(a)) return a;
      return std::nullopt;
    }
    std::size_t i = *split;
    std::uint64_t mid = box.lo[i] + (box.hi[i] - box.lo[i]) / 2;
    Box left = box, right = box;
    left.hi[i] = mid;
    right.lo[i] = mid + 1;
    if (auto r = search(std::move(left))) return r;
    return search(std::move(right));
  }

  const Kernel& k_;
  const Eliminated& el_;
  const Deadline& dl_;
  std::uint64_t mask_;
  int256_t modulus_;
  std::vector<std::size_t> free_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

BvCheck check_bv_sat(const LinearBvSystem& sys, const Deadline& deadline) {
  Kernel k(sys);
  Eliminated el = k.eliminate();
  if (el.unsat) return {};
  BranchAndBound bb(k, el, deadline);
  auto a = bb.run();
  if (!a) return {};
  return {true, std::move(*a)};
}

BvCheck check_bv_sat_exhaustive(const LinearBvSystem& sys) {
  const std::size_t n = sys.vars().size();
  if (sys.width() > 12 || n > 4 || sys.width() * n > 24)
    throw InputError("exhaustive backend limited to width <= 12, at most 4 variables and 2^24 assignments");
  const std::uint64_t m = sys.mask() + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  Assignment a;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      a[sys.vars()[i]] = rest % m;
      rest /= m;
    }
    if (sys.satisfied_by(a)) return {true, a};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Length search

SearchState initial_search(const std::string& var, const LinearBvSystem& sys) {
  return SearchState{var, 0, sys.mask(), {}};
}

std::optional<Candidate> next_length_candidate(SearchState st, Strategy strategy) {
  if (!st.live()) return std::nullopt;
  std::uint64_t c = strategy == Strategy::binary ? st.lo + (st.hi - st.lo) / 2 : st.lo;
  st.trace.push_back(c);
  return Candidate{c, std::move(st)};
}

namespace {

// Returns a state with lo > hi; the interval must stay representable.
SearchState exhausted(SearchState st) {
  st.lo = 1;
  st.hi = 0;
  return st;
}

}  // namespace

SearchState refute_candidate(SearchState st, std::uint64_t c, const LinearBvSystem& sys, Strategy strategy,
                             const Deadline& deadline) {
  auto up = [&] {
    if (c == sys.mask() || c >= st.hi) return exhausted(std::move(st));
    st.lo = c + 1;
    return std::move(st);
  };
  if (strategy == Strategy::linear || c == st.lo) return up();
  LinearBvSystem below = sys;
  below.add_cmp(CmpOp::lt, LinTerm::of_var(st.var), LinTerm::of_constant(c));
  below.add_cmp(CmpOp::ge, LinTerm::of_var(st.var), LinTerm::of_constant(st.lo));
  if (check_bv_sat(below, deadline).sat) {
    st.hi = c - 1;
    return st;
  }
  return up();
}

LengthSolution solve_lengths(const LinearBvSystem& sys, Strategy strategy, const Deadline& deadline,
                             const Assignment& hints, std::uint64_t max_guesses) {
  LengthSolution out;
  if (!check_bv_sat(sys, deadline).sat) return out;
  Kernel k(sys);
  Eliminated el = k.eliminate();
  const auto& names = sys.vars();
  Assignment pins;

  auto determined = [&](std::size_t i) -> std::optional<std::uint64_t> {
    if (!el.defs[i]) return std::nullopt;
    std::uint64_t v = el.defs[i]->k0;
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (el.defs[i]->c[j] == 0) continue;
      auto it = pins.find(names[j]);
      if (it == pins.end()) return std::nullopt;
      v += el.defs[i]->c[j] * it->second;
    }
    return v & sys.mask();
  };

  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& v = names[i];
    if (!sys.mentions(v)) {
      auto h = hints.find(v);
      pins[v] = h == hints.end() ? 0 : h->second & sys.mask();
      continue;
    }
    if (auto d = determined(i)) {
      pins[v] = *d;
      continue;
    }
    LinearBvSystem pinned = sys;
    for (const auto& [name, value] : pins) pinned.add_eq(LinTerm::of_var(name), LinTerm::of_constant(value));
    SearchState st = initial_search(v, sys);
    while (true) {
      if (deadline.expired()) {
        out.status = LengthSolution::Status::timeout;
        return out;
      }
      auto cand = next_length_candidate(std::move(st), strategy);
      if (!cand) throw InternalError("length search exhausted on a satisfiable system");
      if (out.guesses >= max_guesses) {
        out.status = LengthSolution::Status::budget;
        out.traces.push_back(cand->state);
        return out;
      }
      ++out.guesses;
      LinearBvSystem trial = pinned;
      trial.add_eq(LinTerm::of_var(v), LinTerm::of_constant(cand->value));
      BvCheck ok;
      try {
        ok = check_bv_sat(trial, deadline);
        if (!ok.sat) st = refute_candidate(std::move(cand->state), cand->value, pinned, strategy, deadline);
      } catch (const TimeoutError&) {
        out.status = LengthSolution::Status::timeout;
        return out;
      }
      if (ok.sat) {
        pins[v] = cand->value;
        out.traces.push_back(cand->state);
        break;
      }
    }
  }
  if (!sys.satisfied_by(pins)) throw InternalError("length assignment violates its system");
  out.status = LengthSolution::Status::sat;
  out.values = std::move(pins);
  return out;
}

}  // namespace strbv
