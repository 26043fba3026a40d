#include "strbv/core.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace strbv {

// ---------------------------------------------------------------------------
// SolverConfig

void SolverConfig::validate() const {
  if (alphabet.size() < 2) throw InputError("alphabet needs at least two characters");
  std::set<char> seen(alphabet.begin(), alphabet.end());
  if (seen.size() != alphabet.size()) throw InputError("alphabet characters must be distinct");
  for (char c : alphabet) {
    if (c == '"' || c < 0x20 || c > 0x7e) throw InputError("alphabet characters must be printable and not '\"'");
  }
  if (width < 1 || width > 64) throw InputError("bit-vector width must be in 1..64");
  if (budgets.max_depth <= 0 || budgets.max_dnf <= 0 || budgets.timeout_ms <= 0 || budgets.max_diseq_flips <= 0)
    throw InputError("budgets must be positive");
}

std::uint64_t SolverConfig::mask() const {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

bool SolverConfig::in_alphabet(char c) const { return alphabet.find(c) != std::string::npos; }

std::uint64_t SolverConfig::model_len_cap() const {
  if (budgets.max_model_len != 0) return budgets.max_model_len;
  // 3 * 2^width + 16, clamped so witnesses stay materializable.
  constexpr std::uint64_t hard_cap = std::uint64_t{1} << 26;
  if (width >= 24) return hard_cap;
  return std::min(hard_cap, 3 * (std::uint64_t{1} << width) + 16);
}

std::string_view to_string(Strategy s) { return s == Strategy::binary ? "binary" : "linear"; }

std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "binary") return Strategy::binary;
  if (s == "linear") return Strategy::linear;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// StrTerm

struct StrTerm::Node {
  Kind kind;
  std::string text;
  StrTerm left, right;
};

StrTerm::StrTerm() : StrTerm(lit("")) {}

StrTerm StrTerm::var(std::string name) {
  return StrTerm(std::shared_ptr<Node>(new Node{Kind::var, std::move(name), StrTerm(nullptr), StrTerm(nullptr)}));
}

StrTerm StrTerm::lit(std::string text) {
  // Built directly: the default constructor delegates here.
  auto n = std::shared_ptr<Node>(new Node{Kind::lit, std::move(text), StrTerm(nullptr), StrTerm(nullptr)});
  return StrTerm(std::move(n));
}

StrTerm StrTerm::concat(StrTerm left, StrTerm right) {
  auto n = std::shared_ptr<Node>(new Node{Kind::concat, {}, std::move(left), std::move(right)});
  return StrTerm(std::move(n));
}

StrTerm StrTerm::concat(const std::vector<StrTerm>& parts) {
  if (parts.empty()) return lit("");
  StrTerm acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = concat(acc, parts[i]);
  return acc;
}

StrTerm::Kind StrTerm::kind() const { return node_->kind; }
const std::string& StrTerm::text() const { return node_->text; }
const StrTerm& StrTerm::left() const { return node_->left; }
const StrTerm& StrTerm::right() const { return node_->right; }

bool operator==(const StrTerm& a, const StrTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == StrTerm::Kind::concat) return a.left() == b.left() && a.right() == b.right();
  return a.text() == b.text();
}

// ---------------------------------------------------------------------------
// BvTerm

struct BvTerm::Node {
  Kind kind;
  std::string name;
  std::uint64_t value = 0;
  StrTerm str;
  BvTerm left, right;
};

BvTerm::BvTerm() : BvTerm(constant(0)) {}

BvTerm BvTerm::var(std::string name) {
  return BvTerm(std::shared_ptr<Node>(new Node{Kind::var, std::move(name), 0, {}, BvTerm(nullptr), BvTerm(nullptr)}));
}
BvTerm BvTerm::constant(std::uint64_t value) {
  return BvTerm(std::shared_ptr<Node>(new Node{Kind::constant, {}, value, {}, BvTerm(nullptr), BvTerm(nullptr)}));
}
BvTerm BvTerm::strlen(StrTerm arg) {
  return BvTerm(std::shared_ptr<Node>(new Node{Kind::strlen, {}, 0, std::move(arg), BvTerm(nullptr), BvTerm(nullptr)}));
}
BvTerm BvTerm::add(BvTerm left, BvTerm right) {
  return BvTerm(std::shared_ptr<Node>(new Node{Kind::add, {}, 0, {}, std::move(left), std::move(right)}));
}
BvTerm BvTerm::mul(std::uint64_t coeff, BvTerm arg) {
  return BvTerm(std::shared_ptr<Node>(new Node{Kind::mul, {}, coeff, {}, std::move(arg), BvTerm(nullptr)}));
}

BvTerm::Kind BvTerm::kind() const { return node_->kind; }
const std::string& BvTerm::name() const { return node_->name; }
std::uint64_t BvTerm::value() const { return node_->value; }
const StrTerm& BvTerm::str() const { return node_->str; }
const BvTerm& BvTerm::left() const { return node_->left; }
const BvTerm& BvTerm::right() const { return node_->right; }

bool operator==(const BvTerm& a, const BvTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BvTerm::Kind::var: return a.name() == b.name();
    case BvTerm::Kind::constant: return a.value() == b.value();
    case BvTerm::Kind::strlen: return a.str() == b.str();
    case BvTerm::Kind::add: return a.left() == b.left() && a.right() == b.right();
    case BvTerm::Kind::mul: return a.value() == b.value() && a.left() == b.left();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Comparisons

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return CmpOp::ne;
    case CmpOp::ne: return CmpOp::eq;
    case CmpOp::lt: return CmpOp::ge;
    case CmpOp::le: return CmpOp::gt;
    case CmpOp::gt: return CmpOp::le;
    case CmpOp::ge: return CmpOp::lt;
  }
  return op;
}

CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return CmpOp::gt;
    case CmpOp::le: return CmpOp::ge;
    case CmpOp::gt: return CmpOp::lt;
    case CmpOp::ge: return CmpOp::le;
    default: return op;
  }
}

bool compare(CmpOp op, std::uint64_t a, std::uint64_t b) {
  switch (op) {
    case CmpOp::eq: return a == b;
    case CmpOp::ne: return a != b;
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
  }
  return false;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "distinct";
    case CmpOp::lt: return "bvult";
    case CmpOp::le: return "bvule";
    case CmpOp::gt: return "bvugt";
    case CmpOp::ge: return "bvuge";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::optional<Atom> atom;
  std::vector<Formula> children;
};

Formula Formula::atom(Atom a) {
  return Formula(std::shared_ptr<Node>(new Node{Kind::atom, std::move(a), {}}));
}
Formula Formula::conj(std::vector<Formula> parts) {
  return Formula(std::shared_ptr<Node>(new Node{Kind::conj, std::nullopt, std::move(parts)}));
}
Formula Formula::disj(std::vector<Formula> parts) {
  return Formula(std::shared_ptr<Node>(new Node{Kind::disj, std::nullopt, std::move(parts)}));
}
Formula Formula::neg(Formula f) {
  std::vector<Formula> one;
  one.push_back(std::move(f));
  return Formula(std::shared_ptr<Node>(new Node{Kind::neg, std::nullopt, std::move(one)}));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Atom& Formula::as_atom() const { return *node_->atom; }
const std::vector<Formula>& Formula::children() const { return node_->children; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Formula::Kind::atom) return a.as_atom() == b.as_atom();
  return a.children() == b.children();
}

// ---------------------------------------------------------------------------
// Words

Leaf var_leaf(std::string name) { return Leaf{true, std::move(name)}; }
Leaf lit_leaf(std::string text) { return Leaf{false, std::move(text)}; }

Word normalized(Word w) {
  Word out;
  out.reserve(w.size());
  for (auto& l : w) {
    if (!l.is_var && l.text.empty()) continue;
    if (!l.is_var && !out.empty() && !out.back().is_var) {
      out.back().text += l.text;
    } else {
      out.push_back(std::move(l));
    }
  }
  return out;
}

namespace {
void flatten_into(const StrTerm& t, Word& out) {
  switch (t.kind()) {
    case StrTerm::Kind::var: out.push_back(var_leaf(t.text())); break;
    case StrTerm::Kind::lit: out.push_back(lit_leaf(t.text())); break;
    case StrTerm::Kind::concat:
      flatten_into(t.left(), out);
      flatten_into(t.right(), out);
      break;
  }
}
}  // namespace

Word flatten(const StrTerm& t) {
  Word w;
  flatten_into(t, w);
  return normalized(std::move(w));
}

StrTerm to_term(const Word& w) {
  std::vector<StrTerm> parts;
  parts.reserve(w.size());
  for (const auto& l : w) parts.push_back(l.is_var ? StrTerm::var(l.text) : StrTerm::lit(l.text));
  return StrTerm::concat(parts);
}

// ---------------------------------------------------------------------------
// Results

std::string_view to_string(Status s) {
  switch (s) {
    case Status::sat: return "sat";
    case Status::unsat: return "unsat";
    case Status::unknown: return "unknown";
    case Status::timeout: return "timeout";
  }
  return "?";
}

std::string_view to_string(UnknownReason r) {
  switch (r) {
    case UnknownReason::none: return "none";
    case UnknownReason::overlap: return "overlap";
    case UnknownReason::diseq_budget: return "diseq_budget";
    case UnknownReason::dnf_budget: return "dnf_budget";
    case UnknownReason::model_len: return "model_len";
    case UnknownReason::bound: return "bound";
    case UnknownReason::enum_budget: return "enum_budget";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Semantics

std::uint64_t strlen_bv_of(std::string_view s, const SolverConfig& cfg) {
  for (char c : s) {
    if (!cfg.in_alphabet(c)) throw InputError(std::string("character '") + c + "' is not in the alphabet");
  }
  return cfg.wrap(static_cast<std::uint64_t>(s.size()));
}

std::string eval_str(const StrTerm& t, const Model& m) {
  switch (t.kind()) {
    case StrTerm::Kind::lit: return t.text();
    case StrTerm::Kind::var: {
      auto it = m.strings.find(t.text());
      if (it == m.strings.end()) throw EvalError("unassigned string variable " + t.text());
      return it->second;
    }
    case StrTerm::Kind::concat: return eval_str(t.left(), m) + eval_str(t.right(), m);
  }
  return {};
}

std::uint64_t bv_eval(const BvTerm& t, const Model& m, const SolverConfig& cfg) {
  switch (t.kind()) {
    case BvTerm::Kind::var: {
      auto it = m.bitvecs.find(t.name());
      if (it == m.bitvecs.end()) throw EvalError("unassigned bit-vector variable " + t.name());
      return cfg.wrap(it->second);
    }
    case BvTerm::Kind::constant: return cfg.wrap(t.value());
    case BvTerm::Kind::strlen: return strlen_bv_of(eval_str(t.str(), m), cfg);
    // Unsigned 64-bit arithmetic wraps modulo 2^64, a multiple of 2^width.
    case BvTerm::Kind::add: return cfg.wrap(bv_eval(t.left(), m, cfg) + bv_eval(t.right(), m, cfg));
    case BvTerm::Kind::mul: return cfg.wrap(t.value() * bv_eval(t.left(), m, cfg));
  }
  return 0;
}

bool eval_atom(const Atom& a, const Model& m, const SolverConfig& cfg) {
  return std::visit(
      [&](const auto& at) -> bool {
        using T = std::decay_t<decltype(at)>;
        if constexpr (std::is_same_v<T, WordEq>) {
          return eval_str(at.lhs, m) == eval_str(at.rhs, m);
        } else if constexpr (std::is_same_v<T, WordDiseq>) {
          return eval_str(at.lhs, m) != eval_str(at.rhs, m);
        } else {
          return compare(at.op, bv_eval(at.lhs, m, cfg), bv_eval(at.rhs, m, cfg));
        }
      },
      a);
}

bool eval_formula(const Formula& f, const Model& m, const SolverConfig& cfg) {
  switch (f.kind()) {
    case Formula::Kind::atom: return eval_atom(f.as_atom(), m, cfg);
    case Formula::Kind::neg: return !eval_formula(f.children().front(), m, cfg);
    case Formula::Kind::conj: {
      // Evaluate every child so unassigned variables are always reported.
      bool all = true;
      for (const auto& c : f.children()) all = eval_formula(c, m, cfg) && all;
      return all;
    }
    case Formula::Kind::disj: {
      bool any = false;
      for (const auto& c : f.children()) any = eval_formula(c, m, cfg) || any;
      return any;
    }
  }
  return false;
}

namespace {
void add_unique(std::vector<std::string>& v, const std::string& name) {
  if (std::find(v.begin(), v.end(), name) == v.end()) v.push_back(name);
}

void collect_formula(const Formula& f, FreeVars& out) {
  if (f.kind() == Formula::Kind::atom) {
    collect_vars(f.as_atom(), out);
    return;
  }
  for (const auto& c : f.children()) collect_formula(c, out);
}
}  // namespace

void collect_vars(const StrTerm& t, FreeVars& out) {
  switch (t.kind()) {
    case StrTerm::Kind::var: add_unique(out.strings, t.text()); break;
    case StrTerm::Kind::lit: break;
    case StrTerm::Kind::concat:
      collect_vars(t.left(), out);
      collect_vars(t.right(), out);
      break;
  }
}

void collect_vars(const BvTerm& t, FreeVars& out) {
  switch (t.kind()) {
    case BvTerm::Kind::var: add_unique(out.bitvecs, t.name()); break;
    case BvTerm::Kind::constant: break;
    case BvTerm::Kind::strlen: collect_vars(t.str(), out); break;
    case BvTerm::Kind::add:
      collect_vars(t.left(), out);
      collect_vars(t.right(), out);
      break;
    case BvTerm::Kind::mul: collect_vars(t.left(), out); break;
  }
}

void collect_vars(const Atom& a, FreeVars& out) {
  std::visit(
      [&](const auto& at) {
        collect_vars(at.lhs, out);
        collect_vars(at.rhs, out);
      },
      a);
}

FreeVars free_vars(const Formula& f) {
  FreeVars out;
  collect_formula(f, out);
  return out;
}

Model restrict_to(const Model& m, const FreeVars& vars) {
  Model out;
  for (const auto& s : vars.strings) {
    if (auto it = m.strings.find(s); it != m.strings.end()) out.strings.emplace(s, it->second);
  }
  for (const auto& b : vars.bitvecs) {
    if (auto it = m.bitvecs.find(b); it != m.bitvecs.end()) out.bitvecs.emplace(b, it->second);
  }
  return out;
}

Model complete_model(Model m, const FreeVars& vars) {
  for (const auto& s : vars.strings) m.strings.try_emplace(s);
  for (const auto& b : vars.bitvecs) m.bitvecs.try_emplace(b, 0);
  return m;
}

// ---------------------------------------------------------------------------
// Deadline

Deadline::Deadline(int timeout_ms) : at_(Clock::now() + std::chrono::milliseconds(timeout_ms)) {}

Deadline Deadline::never() { return Deadline(); }

bool Deadline::expired() const { return at_ && Clock::now() >= *at_; }

void Deadline::check() const {
  if (expired()) throw TimeoutError();
}

int Deadline::remaining_ms() const {
  if (!at_) return std::numeric_limits<int>::max();
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*at_ - Clock::now()).count();
  return left < 0 ? 0 : static_cast<int>(left);
}

}  // namespace strbv
