#pragma once

// Finite complex exterior algebra over an ordered set of odd generators.
//
// A monomial is a bit mask over generator indices; bit i set means generator
// i is present.  Within a monomial the generators are always read in
// canonical (ascending index) order, so every sign is a transposition count.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace osp22 {

using cplx = std::complex<double>;
using Monomial = std::uint32_t;

inline constexpr cplx I{0.0, 1.0};

enum class Parity { even, odd, mixed };

inline int parity_bit(Parity p) {
  if (p == Parity::mixed) throw ContractViolation("parity_bit of a mixed element");
  return p == Parity::odd ? 1 : 0;
}

inline int degree(Monomial m) { return std::popcount(m); }

class GeneratorSet {
 public:
  GeneratorSet(std::vector<std::string> names, std::vector<std::size_t> partner,
               std::vector<std::string> aliases = {})
      : names_(std::move(names)), partner_(std::move(partner)), aliases_(std::move(aliases)) {
    if (names_.size() > 31) throw ConfigurationError("at most 31 generators supported");
    if (partner_.size() != names_.size())
      throw ConfigurationError("conjugation pairing must cover every generator");
    for (std::size_t i = 0; i < partner_.size(); ++i) {
      if (partner_[i] >= names_.size() || partner_[partner_[i]] != i)
        throw ConfigurationError("conjugation pairing is not an involution");
    }
    if (!aliases_.empty() && aliases_.size() != names_.size())
      throw ConfigurationError("aliases must be given for every generator or none");
  }

  /// θ, θ̄, α, ᾱ, ξ, ξ̄ with the obvious pairing.
  static const std::shared_ptr<const GeneratorSet>& standard() {
    static const auto set = std::make_shared<const GeneratorSet>(
        std::vector<std::string>{"θ", "θ̄", "α", "ᾱ", "ξ", "ξ̄"},
        std::vector<std::size_t>{1, 0, 3, 2, 5, 4},
        std::vector<std::string>{"theta", "thetabar", "alpha", "alphabar", "xi", "xibar"});
    return set;
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::size_t partner(std::size_t i) const { return partner_.at(i); }

  std::size_t index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
      if (!aliases_.empty() && aliases_[i] == name) return i;
    }
    throw ConfigurationError("unknown generator '" + std::string(name) + "'");
  }

  std::string monomial_name(Monomial m) const {
    if (m == 0) return "1";
    std::string s;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (m & (Monomial{1} << i)) s += names_[i];
    return s;
  }

  Monomial parse_monomial(std::string_view text) const {
    if (text == "1" || text.empty()) return 0;
    Monomial m = 0;
    std::size_t last = 0;
    bool first = true;
    while (!text.empty()) {
      // longest match first so that "θ̄" is not read as "θ" + combining mark
      std::size_t best = names_.size(), best_len = 0;
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (text.starts_with(names_[i]) && names_[i].size() > best_len) {
          best = i;
          best_len = names_[i].size();
        }
      }
      if (best == names_.size())
        throw ConfigurationError("cannot parse monomial near '" + std::string(text) + "'");
      if (!first && best <= last)
        throw ConfigurationError("monomial not in canonical order: " + std::string(text));
      m |= Monomial{1} << best;
      last = best;
      first = false;
      text.remove_prefix(best_len);
    }
    return m;
  }

  bool operator==(const GeneratorSet& o) const {
    return names_ == o.names_ && partner_ == o.partner_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> partner_;
  std::vector<std::string> aliases_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

namespace detail {

/// Sign of reordering a·b (both canonical) into canonical order; 0 if they overlap.
inline int product_sign(Monomial a, Monomial b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Monomial rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    // generators of a with index above j must hop over b_j
    const Monomial above = j >= 31 ? 0 : (a >> (j + 1));
    inversions += std::popcount(above);
  }
  return (inversions & 1) ? -1 : 1;
}

/// Conjugate of a monomial: partners substituted in place, then re-sorted.
inline std::pair<Monomial, int> conj_monomial(const GeneratorSet& gens, Monomial m) {
  std::vector<std::size_t> seq;
  for (Monomial rest = m; rest; rest &= rest - 1)
    seq.push_back(gens.partner(static_cast<std::size_t>(std::countr_zero(rest))));
  int inversions = 0;
  Monomial out = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out |= Monomial{1} << seq[i];
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inversions;
  }
  return {out, (inversions & 1) ? -1 : 1};
}

}  // namespace detail

class GrassmannElement {
 public:
  using Terms = std::map<Monomial, cplx>;

  GrassmannElement() : gens_(GeneratorSet::standard()) {}
  explicit GrassmannElement(GeneratorSetPtr gens) : gens_(std::move(gens)) {}
  explicit GrassmannElement(cplx c, GeneratorSetPtr gens = GeneratorSet::standard())
      : gens_(std::move(gens)) {
    add_term(0, c);
  }

  static GrassmannElement generator(std::string_view name,
                                    GeneratorSetPtr gens = GeneratorSet::standard()) {
    GrassmannElement g(gens);
    g.add_term(Monomial{1} << gens->index(name), 1.0);
    return g;
  }

  static GrassmannElement monomial(Monomial m, cplx c,
                                   GeneratorSetPtr gens = GeneratorSet::standard()) {
    GrassmannElement g(std::move(gens));
    g.add_term(m, c);
    return g;
  }

  const GeneratorSetPtr& generators() const { return gens_; }
  const Terms& terms() const { return terms_; }
  double drop_tolerance() const { return drop_tol_; }
  void set_drop_tolerance(double tol) {
    drop_tol_ = tol;
    prune();
  }

  cplx coeff(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx{} : it->second;
  }
  cplx body() const { return coeff(0); }
  GrassmannElement soul() const {
    GrassmannElement s = *this;
    s.terms_.erase(0);
    return s;
  }
  bool is_zero() const { return terms_.empty(); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  void add_term(Monomial m, cplx c) {
    if (c == cplx{}) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) <= drop_tol_) terms_.erase(it);
  }

  GrassmannElement& operator+=(const GrassmannElement& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  GrassmannElement& operator-=(const GrassmannElement& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  GrassmannElement& operator*=(cplx s) {
    for (auto& [m, c] : terms_) c *= s;
    prune();
    return *this;
  }

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator-(GrassmannElement a) { return a *= -1.0; }
  friend GrassmannElement operator*(GrassmannElement a, cplx s) { return a *= s; }
  friend GrassmannElement operator*(cplx s, GrassmannElement a) { return a *= s; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);

  void check_same(const GrassmannElement& o) const {
    if (gens_ != o.gens_ && !(*gens_ == *o.gens_))
      throw ConfigurationError("Grassmann elements over different generator sets");
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(c.real()) + (c.imag() < 0 ? "" : "+") +
           std::to_string(c.imag()) + "i)";
      if (m) s += gens_->monomial_name(m);
    }
    return s;
  }

 private:
  void prune() {
    std::erase_if(terms_, [this](const auto& kv) { return std::abs(kv.second) <= drop_tol_; });
  }

  GeneratorSetPtr gens_;
  Terms terms_;
  double drop_tol_ = 0.0;
};

inline GrassmannElement gr_mul(const GrassmannElement& a, const GrassmannElement& b) {
  a.check_same(b);
  GrassmannElement out(a.generators());
  out.set_drop_tolerance(std::max(a.drop_tolerance(), b.drop_tolerance()));
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      const int s = detail::product_sign(ma, mb);
      if (s) out.add_term(ma | mb, static_cast<double>(s) * ca * cb);
    }
  return out;
}

inline GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  return gr_mul(a, b);
}

/// Conjugation that keeps factor order: conj(ab) = conj(a) conj(b).
inline GrassmannElement gr_conj(const GrassmannElement& a) {
  GrassmannElement out(a.generators());
  for (const auto& [m, c] : a.terms()) {
    const auto [mc, s] = detail::conj_monomial(*a.generators(), m);
    out.add_term(mc, static_cast<double>(s) * std::conj(c));
  }
  return out;
}

inline Parity gr_parity(const GrassmannElement& a) {
  bool even = false, odd = false;
  for (const auto& [m, c] : a.terms()) (degree(m) & 1 ? odd : even) = true;
  if (even && odd) return Parity::mixed;
  return odd ? Parity::odd : Parity::even;
}

/// Grade involution: odd part negated.  Passing an odd operator across a
/// coefficient acts on it this way.
inline GrassmannElement gr_grade_involution(const GrassmannElement& a) {
  GrassmannElement out(a.generators());
  for (const auto& [m, c] : a.terms()) out.add_term(m, degree(m) & 1 ? -c : c);
  return out;
}

/// Iterated Berezin integral.  `over` lists the differentials as written,
/// innermost first: {θ, θ̄} means ∫ ... dθ dθ̄, normalized so ∫θ̄θ dθ dθ̄ = 1.
/// Each differential acts from the right: its generator is moved to the end
/// of the monomial and removed.
inline GrassmannElement gr_berezin(const GrassmannElement& a, std::span<const std::size_t> over) {
  GrassmannElement cur = a;
  for (const std::size_t g : over) {
    if (g >= a.generators()->size()) throw ConfigurationError("integration variable out of range");
    const Monomial bit = Monomial{1} << g;
    const Monomial above = ~((bit << 1) - 1);
    GrassmannElement next(a.generators());
    for (const auto& [m, c] : cur.terms()) {
      if (!(m & bit)) continue;
      const int after = std::popcount(m & above);
      next.add_term(m ^ bit, (after & 1) ? -c : c);
    }
    cur = std::move(next);
  }
  return cur;
}

inline GrassmannElement gr_berezin(const GrassmannElement& a,
                                   std::initializer_list<std::string_view> over) {
  std::vector<std::size_t> idx;
  for (auto name : over) idx.push_back(a.generators()->index(name));
  return gr_berezin(a, std::span<const std::size_t>(idx));
}

/// f(a) for a with invertible body, from the Taylor coefficients of f at the
/// body: f(b + s) = Σ_k taylor(k) s^k.  The series terminates because s is
/// nilpotent.
inline GrassmannElement gr_apply(const GrassmannElement& a,
                                 const std::function<cplx(int)>& taylor) {
  const GrassmannElement s = a.soul();
  GrassmannElement out(taylor(0), a.generators());
  GrassmannElement power(cplx{1.0}, a.generators());
  for (int k = 1; k <= static_cast<int>(a.generators()->size()); ++k) {
    power = power * s;
    if (power.is_zero()) break;
    out += power * taylor(k);
  }
  return out;
}

/// a^r, principal branch on the body.
inline GrassmannElement gr_pow(const GrassmannElement& a, double r) {
  const cplx b = a.body();
  if (b == cplx{}) throw DomainError("gr_pow: element has zero body");
  return gr_apply(a, [b, r](int k) {
    // binomial(r, k) b^(r-k)
    double binom = 1.0;
    for (int j = 0; j < k; ++j) binom *= (r - j) / (j + 1);
    return binom * std::pow(b, r - k);
  });
}

inline GrassmannElement gr_inverse(const GrassmannElement& a) { return gr_pow(a, -1.0); }

inline double max_abs_diff(const GrassmannElement& a, const GrassmannElement& b) {
  return (a - b).max_abs();
}

}  // namespace osp22
